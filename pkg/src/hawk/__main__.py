import sys

from hawk.cli import main

sys.exit(main())
