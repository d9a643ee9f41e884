"""A proof kernel for higher type arithmetic with a parametricity
translation from its extensional variant back into the intensional one."""

__version__ = "0.1.0"
