"""Command-line front end: one-shot solving, an interactive negotiation
loop, and the HTTP service.

Exit codes: 0 when a solution is reached, 2 when the problem stays
over-constrained, 1 on errors.
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import SolverError
from .hierarchy import RelaxPolicy
from .problem import Problem, bundled_path, load_problem_file
from .service import serve
from .session import Conflict, Refused, Restored, Session, Solved, start_session


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="explaincp",
        description="Explanation-based finite-domain solving with hierarchical conflict negotiation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    solve = sub.add_parser("solve", help="solve a problem file")
    solve.add_argument("file", help="problem file (JSON), or the name of a bundled problem")
    solve.add_argument("--view", default=None, help="view to project conflicts onto")
    solve.add_argument(
        "--policy",
        choices=[p.value for p in RelaxPolicy],
        default=RelaxPolicy.ALL.value,
        help="how relaxing a box maps to constraint retractions",
    )
    solve.add_argument("--interactive", action="store_true", help="negotiate conflicts on the terminal")
    solve.add_argument("--serve", type=int, metavar="PORT", default=None, help="run the HTTP service instead")
    args = parser.parse_args(argv)

    try:
        problem = _load(args.file)
    except (SolverError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    if args.serve is not None:
        serve(problem, args.serve, ready=lambda port: print(f"serving on http://127.0.0.1:{port}", flush=True))
        return 0

    view_name = args.view if args.view is not None else next(iter(problem.views), None)
    if view_name is None:
        print("error: the problem defines no views", file=sys.stderr)
        return 1
    try:
        session = start_session(problem, view_name, RelaxPolicy.parse(args.policy))
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    _print_tree(problem)
    if args.interactive:
        return _interactive(session)
    return _one_shot(session)


def _load(name: str) -> Problem:
    if not os.path.exists(name):
        candidate = bundled_path(name)
        if os.path.exists(candidate):
            return load_problem_file(candidate)
    return load_problem_file(name)


def _one_shot(session: Session) -> int:
    status = session.run()
    if isinstance(status, Solved):
        print("\n!!! A solution has been obtained")
        print(f"!!! {_render_assignment(session)}")
        return 0
    assert isinstance(status, Conflict)
    print("\n!!! The problem is over-constrained because of:")
    _print_conflict(status)
    return 2


def _interactive(session: Session) -> int:
    status = session.run()
    while True:
        if isinstance(status, Conflict):
            print("\n!!! A contradiction occurred because of:")
            _print_conflict(status)
            choice = _ask(f"** Which block would you like to relax ? (1-{len(status.items)} 0-none)  ")
            if choice is None or choice == 0:
                return 2
            try:
                outcome = session.relax(choice)
            except SolverError as exc:
                print(f"error: {exc}")
                continue
            for cid in outcome.removed:
                constraint = session.solver.constraints[cid]
                box = session.tree.box_of(cid)
                print(f"Removing constraint {constraint} from {box}")
            status = session.status
            continue

        assert isinstance(status, Solved)
        print("\n!!! A solution has now been obtained")
        print(f"!!! {_render_assignment(session)}")
        if not session.relaxed:
            return 0
        print("\n!!! The following blocks have been relaxed")
        boxes = list(session.relaxed)
        for i, code in enumerate(boxes, start=1):
            node = session.tree.nodes[code]
            count = len(session.relaxed[code])
            print(f"  {i} : [{code}] {node.label} ({count} constraints relaxed)")
        choice = _ask(f"Which one would you like to set back ? (1-{len(boxes)} 0-none)  ")
        if choice is None or choice == 0 or not 1 <= choice <= len(boxes):
            return 0
        outcome = session.restore(boxes[choice - 1])
        if isinstance(outcome, Restored):
            if outcome.extra:
                print("In order to do that some constraints need to be removed:")
                for box, ids in outcome.extra.items():
                    for cid in ids:
                        print(f"Removing constraint {session.solver.constraints[cid]} from {box}")
        else:
            assert isinstance(outcome, Refused)
            print("Setting this block back is not possible; it conflicts with:")
            for code in outcome.conflict:
                print(f"  [{code}] {session.tree.nodes[code].label}")
        status = session.status


def _ask(prompt: str) -> int | None:
    try:
        text = input(prompt)
    except EOFError:
        return None
    try:
        return int(text.strip())
    except ValueError:
        print("please answer with a number")
        return _ask(prompt)


def _print_tree(problem: Problem) -> None:
    print(f"=== {problem.name} : description")

    def walk(code: str, depth: int) -> None:
        node = problem.tree.nodes[code]
        print(f"+{'.' * (4 + 2 * depth)}[{node.code}] {node.label}")
        for child in node.children:
            walk(child, depth + 1)

    walk(problem.tree.root, 0)


def _print_conflict(status: Conflict) -> None:
    for item in status.items:
        print(f"{item.index}: [{item.code}] {item.label}")


def _render_assignment(session: Session) -> str:
    assert isinstance(session.status, Solved)
    assignment = session.status.assignment
    inner = ", ".join(f"{var}:{assignment[var]}" for var in session.solver.store.variables)
    return f"({inner})"


if __name__ == "__main__":
    sys.exit(main())
