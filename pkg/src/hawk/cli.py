"""Command-line driver.

Exit codes: 0 success, 1 semantic failure, 2 usage or parse failure.
"""

from __future__ import annotations

import argparse
import contextlib
import fnmatch
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from hawk import conjecture
from hawk import corpus as bundled
from hawk.kernel import SortError, check_judgment, infer_sort
from hawk.rewrite import StepBudgetExceeded, normalize_term, trace_term
from hawk.surface import (
    ParseError, SourceFile, TheoremDecl, parse, parse_term, show_file,
    show_formula, show_proof, show_term,
)
from hawk.syntax import LEHAW, LHAW, as_numeral, subst_term

OK, FAILED, USAGE = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    inputs: list
    output: str | None = None
    logic: str | None = None
    step_budget: int | None = None
    filter: str | None = None
    format: str = "human"
    workers: int = 4


class _Usage(Exception):
    pass


def _read(path: str) -> SourceFile:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as e:
        raise _Usage(f"{path}: {e.strerror}") from None
    try:
        return parse(data)
    except ParseError as e:
        raise _Usage(f"{path}:{e.line}:{e.col}: parse error: {e.message}") from None


def _report(cfg, *fields, human: str):
    print("\t".join(map(str, fields)) if cfg.format == "machine" else human)


# ---------------------------------------------------------------- commands


def cmd_check(cfg: RunConfig) -> int:
    sf = _read(cfg.inputs[0])
    failed = 0
    for thm in sf.theorems:
        rep = check_judgment(sf.judgment(thm, cfg.logic))
        if not rep.accepted:
            failed += 1
        _report(cfg, thm.name, rep.verdict, rep.rule or "",
                human=f"{thm.name}: {rep.describe()}" if not rep.accepted else f"{thm.name}: accepted")
    n = len(sf.theorems)
    _report(cfg, "total", n, n - failed, human=f"{n} theorem(s), {n - failed} accepted")
    return OK if not failed else FAILED


def _provenance(name, unit, rep) -> str:
    j = unit.produced
    lines = [f"translation defect in {name}: {rep.describe()}",
             f"  source goal: {show_formula(unit.source.goal)}",
             f"  source proof: {show_proof(unit.source.proof)}",
             f"  produced goal: {show_formula(j.goal)}",
             f"  produced proof: {show_proof(j.proof)}"]
    lines += [f"  note: {n}" for n in unit.notes]
    return "\n".join(lines)


def cmd_translate(cfg: RunConfig) -> int:
    from hawk.translate import translate_proof

    sf = _read(cfg.inputs[0])
    logic = cfg.logic or sf.logic
    out = SourceFile(LHAW, True, [])
    for thm in sf.theorems:
        j = sf.judgment(thm, logic)
        rep = check_judgment(j)
        if not rep.accepted:
            print(f"{thm.name}: source {rep.describe()}", file=sys.stderr)
            return FAILED
        unit = translate_proof(j.logic, j.sig, j.ctx, j.proof, j.goal)
        p = unit.produced
        rep = unit.check()
        if not rep.accepted:
            print(_provenance(thm.name, unit, rep), file=sys.stderr)
            return FAILED
        out.decls.append(TheoremDecl(thm.name, p.sig, p.ctx, p.goal, p.proof))
    text = show_file(out)
    # the printed artifact itself is re-read and re-checked before it is written
    back = parse(text)
    for thm in back.theorems:
        rep = check_judgment(back.judgment(thm))
        if not rep.accepted:
            print(f"{thm.name}: printed translation rejected: {rep.describe()}", file=sys.stderr)
            return FAILED
    with open(cfg.output, "w", encoding="utf-8") as fh:
        fh.write(text)
    _report(cfg, "translated", len(out.theorems), cfg.output,
            human=f"{len(out.theorems)} theorem(s) translated and re-checked in lhaw: {cfg.output}")
    return OK


def cmd_normalize(cfg: RunConfig, expr: str, defs_path: str | None, trace: bool) -> int:
    try:
        t = parse_term(expr)
    except ParseError as e:
        raise _Usage(f"<expr>:{e.line}:{e.col}: parse error: {e.message}") from None
    sig = []
    if defs_path:
        defs = _read(defs_path).expanded_defs()
        t = subst_term(t, {k: v for k, (_, v) in defs.items()})
    try:
        s = infer_sort(sig, t)
    except SortError as e:
        raise _Usage(f"<expr>: ill-sorted: {e}") from None
    try:
        if trace:
            for st in trace_term(t):
                pos = ".".join(map(str, st.position)) or "root"
                _report(cfg, "step", st.rule, pos, show_term(st.after),
                        human=f"  {st.rule} at {pos}: {show_term(st.after)}")
        nf = normalize_term(t)
    except StepBudgetExceeded as e:
        print(f"step budget exhausted: {e}", file=sys.stderr)
        return FAILED
    n = as_numeral(nf)
    _report(cfg, "normal", show_term(nf), "" if n is None else n,
            human=show_term(nf) + ("" if n is None else f"    -- {n} : {s}"))
    return OK


def cmd_conjecture(cfg: RunConfig, max_steps: int) -> int:
    sf = _read(cfg.inputs[0])
    judgments = [(t.name, sf.judgment(t, cfg.logic)) for t in sf.theorems]
    for name, j in judgments:
        rep = check_judgment(j)
        if not rep.accepted:
            print(f"{name}: {rep.describe()}", file=sys.stderr)
            return FAILED
    rep = conjecture.run(judgments, max_steps)
    for i in rep.instances:
        pos = ".".join(map(str, i.position)) or "root"
        _report(cfg, i.theorem, pos, i.rule, i.verdict, i.detail,
                human=f"{i.theorem} @{pos} {i.rule}: {i.verdict} ({i.detail})")
    print(rep.summary())
    # exploratory: the verdicts never decide the exit code
    return OK


def cmd_corpus(cfg: RunConfig) -> int:
    items = bundled.items()
    if cfg.filter:
        items = [i for i in items if i.name == cfg.filter or fnmatch.fnmatchcase(i.name, cfg.filter)]
        if not items:
            raise _Usage(f"no corpus item matches {cfg.filter!r}")
    failed = 0
    pool = ThreadPoolExecutor(max_workers=max(1, cfg.workers))
    try:
        for item, (res, ms) in zip(items, pool.map(bundled.timed, items)):
            if item.required and not res.passed:
                failed += 1
            line = f"{item.name}\t{item.logic}\tcheck={res.check}\ttranslate={res.translate}\tms={ms:.1f}"
            if cfg.format == "human" and res.detail:
                line += f"\t{res.detail}"
            print(line, flush=True)
    finally:
        pool.shutdown(cancel_futures=True)
    print(f"# {len(items)} item(s), {failed} required failure(s)", file=sys.stderr)
    return OK if not failed else FAILED


# ---------------------------------------------------------------- entry point


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--step-budget", type=int, help="rewrite step budget (overrides HAWK_STEP_BUDGET)")
    common.add_argument("--format", choices=("human", "machine"), default="human")

    p = argparse.ArgumentParser(prog="hawk", description="Proof checker and parametricity translation for LHAw/LEHAw.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="check every theorem of a .haw file")
    c.add_argument("file")
    c.add_argument("--logic", choices=(LHAW, LEHAW))

    t = sub.add_parser("translate", parents=[common], help="translate a .haw file into a checked lhaw file")
    t.add_argument("file")
    t.add_argument("-o", "--output", required=True)
    t.add_argument("--logic", choices=(LHAW, LEHAW))

    n = sub.add_parser("normalize", parents=[common], help="normalize a System T term")
    n.add_argument("-e", "--expr", required=True)
    n.add_argument("--trace", action="store_true")
    n.add_argument("--defs", help=".haw file whose definitions are expanded in the expression")

    k = sub.add_parser("conjecture", parents=[common], help="run the proof-reduction experiment")
    k.add_argument("file")
    k.add_argument("--max-steps", type=int, default=conjecture.DEFAULT_MAX_STEPS)
    k.add_argument("--logic", choices=(LHAW, LEHAW))

    r = sub.add_parser("corpus", parents=[common], help="run the bundled corpus")
    r.add_argument("--filter", help="item name or glob")
    r.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    return p


@contextlib.contextmanager
def _budget(n):
    if n is None:
        yield
        return
    old = os.environ.get("HAWK_STEP_BUDGET")
    os.environ["HAWK_STEP_BUDGET"] = str(n)
    try:
        yield
    finally:
        if old is None:
            del os.environ["HAWK_STEP_BUDGET"]
        else:
            os.environ["HAWK_STEP_BUDGET"] = old


def main(argv=None) -> int:
    try:
        a = _parser().parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    if a.step_budget is not None and a.step_budget < 1:
        print("hawk: --step-budget must be at least 1", file=sys.stderr)
        return USAGE
    env = os.environ.get("HAWK_STEP_BUDGET")
    if a.step_budget is None and env is not None and not (env.isdigit() and int(env) >= 1):
        print(f"hawk: HAWK_STEP_BUDGET must be a positive integer, got {env!r}", file=sys.stderr)
        return USAGE
    if a.command == "conjecture" and a.max_steps < 1:
        print("hawk: --max-steps must be at least 1", file=sys.stderr)
        return USAGE
    cfg = RunConfig(
        a.command, [a.file] if hasattr(a, "file") else [], getattr(a, "output", None),
        getattr(a, "logic", None), a.step_budget, getattr(a, "filter", None), a.format,
        getattr(a, "workers", 1),
    )
    try:
        with _budget(cfg.step_budget):
            match cfg.command:
                case "check":
                    return cmd_check(cfg)
                case "translate":
                    return cmd_translate(cfg)
                case "normalize":
                    return cmd_normalize(cfg, a.expr, a.defs, a.trace)
                case "conjecture":
                    return cmd_conjecture(cfg, a.max_steps)
                case "corpus":
                    return cmd_corpus(cfg)
    except _Usage as e:
        print(f"hawk: {e}", file=sys.stderr)
        return USAGE
    except BrokenPipeError:
        # reader went away (e.g. `| head`); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return FAILED
    return USAGE
