"""Command-line front end: ``selfsim <subcommand> --example NAME | --file PATH | --stdin``.

Results go to stdout as JSON, DOT or plain text. Domain errors exit with
status 1 and a JSON object ``{code, message, context}`` on stderr; usage
errors exit with status 2.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

from . import analysis, examples, schreier
from .automaton import (
    Automaton,
    AutomatonError,
    act,
    dual,
    is_invertible,
    minimize,
    power,
    product,
    render_square_tiles,
)
from .graph import LabeledGraph
from .group import GroupWord
from .nucleus import MAX_ELEMENTS, MAX_LEN, nucleus
from .permgroup import LEVEL_CAP


class InputError(AutomatonError):
    code = "input"


# input ---------------------------------------------------------------------

def _read_automaton(args, prefix: str = "") -> Automaton:
    example = getattr(args, prefix + "example")
    path = getattr(args, prefix + "file")
    if example is not None:
        return examples.build(example).automaton
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}") from None
    else:
        text = sys.stdin.buffer.read().decode("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"input is not valid JSON: {exc}") from None
    if isinstance(doc, dict) and "automaton" in doc and "alphabet_size" not in doc:
        doc = doc["automaton"]
    try:
        return Automaton.from_json(doc)
    except (KeyError, TypeError) as exc:
        raise InputError(f"input is not an automaton document: {exc!r}") from None


def _subject(args) -> Automaton:
    automaton = _read_automaton(args)
    if args.nuclear:
        report = nucleus(automaton, args.max_elements, args.max_len)
        if not report.contracting:
            raise AutomatonError("no nucleus automaton: the nucleus search hit its bounds")
        automaton = report.nuclear_automaton
    return automaton


def _letters(text: str, automaton: Automaton) -> tuple:
    try:
        word = schreier.parse_vertex(text, automaton.alphabet_size)
    except ValueError:
        raise InputError(f"cannot read letter word {text!r}") from None
    if any(not 0 <= a < automaton.alphabet_size for a in word):
        raise InputError(f"letter word {text!r} leaves the alphabet 0..{automaton.alphabet_size - 1}")
    return word


# output --------------------------------------------------------------------

def _dumps(payload) -> str:
    return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"


def _graph_text(graph: LabeledGraph) -> str:
    lines = [f"vertices: {' '.join(map(str, graph.vertices))}"]
    lines += [f"{s} -> {t} [{lab}]" for s, t, lab in graph.edges]
    return "\n".join(lines) + "\n"


def _render(payload, fmt: str, text=None, dot=None) -> str:
    if fmt == "json":
        return _dumps(payload)
    if fmt == "dot":
        if dot is None:
            raise InputError("this subcommand has no DOT output")
        return dot
    if text is not None:
        return text
    if isinstance(payload, bool):
        return ("true" if payload else "false") + "\n"
    return _dumps(payload)


def _graph_out(graph: LabeledGraph, fmt: str, name: str) -> str:
    return _render(graph.to_json(), fmt, _graph_text(graph), graph.to_dot(name))


# subcommands ---------------------------------------------------------------

def cmd_dual(args):
    return _render(dual(_subject(args)).to_json(), args.format)


def cmd_product(args):
    right = _read_automaton(args, "with_")
    return _render(product(_subject(args), right).to_json(), args.format)


def cmd_power(args):
    return _render(power(_subject(args), args.n).to_json(), args.format)


def cmd_act(args):
    automaton = _subject(args)
    word = _letters(args.input, automaton)
    k = automaton.alphabet_size
    if is_invertible(automaton):
        g = GroupWord.parse(automaton, args.word)
        out, rest = g.apply(word)
        restriction = rest.reduced().text()
    else:
        states = [q for q in args.word.replace("·", ".").split(".") if q]
        out, rest = act(automaton, states, word)
        restriction = ".".join(automaton.states[q] for q in rest)
    output = schreier.vertex_key(out, k)
    payload = {"output": output, "restriction": restriction}
    return _render(payload, args.format, output + "\n")


def cmd_minimize(args):
    quotient, state_map = minimize(_subject(args))
    payload = {"automaton": quotient.to_json(), "state_map": list(state_map)}
    return _render(payload, args.format)


def cmd_tiles_ascii(args):
    automaton = _subject(args)
    art = render_square_tiles(automaton, omit_identity=args.omit_identity)
    return _render({"tiles": art}, args.format, art)


def cmd_invertible(args):
    value = is_invertible(_subject(args))
    return _render({"invertible": value}, args.format, _bool(value))


def cmd_nucleus(args):
    report = nucleus(_subject(args), args.max_elements, args.max_len, args.schedule)
    text = "\n".join(report.names()) + "\n" if report.contracting else report.status.value + "\n"
    return _render(report.to_json(), args.format, text)


def cmd_nuclear(args):
    value = analysis.is_nuclear(_subject(args))
    return _render({"nuclear": value}, args.format, _bool(value))


def cmd_smooth(args):
    value = analysis.is_smooth(_subject(args))
    return _render({"smooth": value}, args.format, _bool(value))


def cmd_expansion_rule(args):
    rule = analysis.expansion_rule(_subject(args))
    payload = {"present": rule is not None, "rule": rule.to_json() if rule else None}
    return _render(payload, args.format)


def cmd_open_set(args):
    value = analysis.open_set_condition(_subject(args))
    return _render({"open_set": value}, args.format, _bool(value))


def cmd_recurrent(args):
    report = analysis.recurrence(_subject(args), args.search_len, args.max_search)
    return _render(report.to_json(), args.format, report.status.value + "\n")


def cmd_transitive(args):
    levels = analysis.spherical_transitivity(_subject(args), args.max_level, args.cap)
    payload = {"levels": {str(n): v for n, v in enumerate(levels, 1)}, "all": all(levels)}
    return _render(payload, args.format, _bool(all(levels)))


def cmd_restriction_depth(args):
    automaton = _read_automaton(args)
    report = nucleus(automaton, args.max_elements, args.max_len)
    if not report.contracting:
        raise AutomatonError("restriction depth needs a contracting automaton")
    g = GroupWord.parse(automaton, args.word)
    depth = analysis.restriction_depth(g, report.nucleus, args.max_depth)
    value = depth if isinstance(depth, int) else str(depth)
    return _render({"word": g.text(), "depth": value}, args.format, f"{value}\n")


def cmd_quotient_order(args):
    order = analysis.level_quotient_order(_subject(args), args.level, args.cap)
    return _render({"level": args.level, "order": order}, args.format, f"{order}\n")


def cmd_schreier(args):
    level = schreier.schreier_graph(_subject(args), args.level, args.include_identity, cap=args.cap)
    return _graph_out(level.graph, args.format, f"schreier_{args.level}")


def cmd_dual_power(args):
    include = not args.exclude_identity
    graph = schreier.dual_power_graph(_subject(args), args.level, include, cap=args.cap)
    return _graph_out(graph, args.format, f"dual_power_{args.level}")


def _map_payload(gmap: schreier.GraphMap) -> dict:
    fibers = gmap.fiber_sizes()
    payload = gmap.to_json()
    payload["morphism"] = gmap.is_morphism()
    payload["fiber_sizes"] = sorted(set(fibers.values()))
    payload["unique_lifts"] = gmap.unique_lifts()
    return payload


def cmd_covering(args):
    gmap = schreier.covering_map(_subject(args), args.level, args.include_identity, args.cap)
    return _render(_map_payload(gmap), args.format)


def cmd_projection(args):
    labels = args.labels.split(",") if args.labels else None
    gmap = schreier.projection_map(_subject(args), args.level, labels, cap=args.cap)
    payload = _map_payload(gmap)
    del payload["unique_lifts"]
    return _render(payload, args.format)


def cmd_tile_partition(args):
    automaton = _subject(args)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        part = schreier.tile_partition(automaton, args.level, args.tile_level, args.cap)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    text = "".join(
        f"{w}: {' | '.join(' '.join(c) for c in comps)}\n" for w, comps in part.components.items()
    )
    return _render(part.to_json(), args.format, text, part.to_dot())


def cmd_tile_adjacency(args):
    graph = schreier.tile_adjacency(_subject(args), args.level, args.tile_level, args.cap)
    return _graph_out(graph, args.format, f"tile_adjacency_{args.level}_{args.tile_level}")


def cmd_tile_connectivity(args):
    result = schreier.tile_connectivity(_subject(args), args.level, args.tile_level, args.cap)
    text = "".join(f"{w}: {_bool(v).strip()}\n" for w, v in result.items())
    return _render({"tiles": result, "all_connected": all(result.values())}, args.format, text)


def cmd_orbit(args):
    automaton = _subject(args)
    base = _letters(args.base, automaton)
    graph = schreier.orbit_schreier(automaton, base, args.include_identity, args.cap)
    return _graph_out(graph, args.format, "orbit")


def cmd_examples(args):
    if args.action == "list":
        payload = [
            {"name": e.name, "title": e.title, "automaton": e.automaton.to_json()}
            for e in examples.all_examples()
        ]
        text = "".join(f"{e.name}\t{e.title}\n" for e in examples.all_examples())
        return _render(payload, args.format, text)
    if args.name is None:
        raise InputError("examples dump needs an example name")
    return _dumps(examples.build(args.name).automaton.to_json())


def _bool(value: bool) -> str:
    return ("true" if value else "false") + "\n"


# parser --------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seedless", action="store_true",
                   help="accepted for scripting; every command is deterministic anyway")
    return p


def _input(required: bool = True) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    src = p.add_mutually_exclusive_group(required=required)
    src.add_argument("--example", choices=examples.NAMES, help="a built-in example")
    src.add_argument("--file", help="automaton JSON document")
    src.add_argument("--stdin", action="store_true", help="read the automaton JSON from stdin")
    p.add_argument("--nuclear", action="store_true", help="work on the nucleus automaton")
    p.add_argument("--max-elements", type=int, default=MAX_ELEMENTS)
    p.add_argument("--max-len", type=int, default=MAX_LEN)
    p.add_argument("--cap", type=int, default=LEVEL_CAP, help="largest level size |A|^n")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="selfsim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    common, inp = _common(), _input()

    def add(name, func, fmt="json", formats=("json", "text"), help=None, with_input=True):
        parents = [common, inp] if with_input else [common]
        p = sub.add_parser(name, parents=parents, help=help)
        p.add_argument("--format", choices=formats, default=fmt)
        p.set_defaults(func=func)
        return p

    graph_formats = ("json", "dot", "text")
    add("dual", cmd_dual, help="dual automaton")
    p = add("product", cmd_product, help="composition with a second automaton")
    right = p.add_mutually_exclusive_group(required=True)
    right.add_argument("--with-example", choices=examples.NAMES)
    right.add_argument("--with-file")
    p = add("power", cmd_power, help="n-fold composition")
    p.add_argument("--n", type=int, required=True)
    p = add("act", cmd_act, fmt="text", help="image of a letter word")
    p.add_argument("--word", required=True, help="state word such as a·b^-1")
    p.add_argument("--input", required=True, help="letter word such as 0110")
    add("minimize", cmd_minimize, help="minimal quotient automaton")
    p = add("tiles-ascii", cmd_tiles_ascii, fmt="text", help="square tiles as ASCII art")
    p.add_argument("--omit-identity", action="store_true")
    add("invertible", cmd_invertible)
    p = add("nucleus", cmd_nucleus)
    p.add_argument("--schedule", choices=("limits-first", "products-first"), default="limits-first")
    add("nuclear", cmd_nuclear)
    add("smooth", cmd_smooth)
    add("expansion-rule", cmd_expansion_rule)
    add("open-set", cmd_open_set)
    p = add("recurrent", cmd_recurrent)
    p.add_argument("--search-len", type=int, default=analysis.SEARCH_LEN)
    p.add_argument("--max-search", type=int, default=20_000)
    p = add("transitive", cmd_transitive)
    p.add_argument("--max-level", type=int, default=5)
    p = add("restriction-depth", cmd_restriction_depth)
    p.add_argument("--word", required=True)
    p.add_argument("--max-depth", type=int, default=64)
    p = add("quotient-order", cmd_quotient_order)
    p.add_argument("--level", type=int, required=True)
    p = add("schreier", cmd_schreier, formats=graph_formats)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--include-identity", action="store_true")
    p = add("dual-power", cmd_dual_power, formats=graph_formats)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--exclude-identity", action="store_true")
    p = add("covering", cmd_covering)
    p.add_argument("--level", type=int, required=True, help="maps level+1 onto level")
    p.add_argument("--include-identity", action="store_true")
    p = add("projection", cmd_projection)
    p.add_argument("--level", type=int, required=True, help="maps level+1 to level")
    p.add_argument("--labels", help="comma-separated label states for the lower graph")
    for name, func, fmts in (
        ("tile-partition", cmd_tile_partition, graph_formats),
        ("tile-adjacency", cmd_tile_adjacency, graph_formats),
        ("tile-connectivity", cmd_tile_connectivity, ("json", "text")),
    ):
        p = add(name, func, formats=fmts)
        p.add_argument("--level", type=int, required=True, help="ambient level m")
        p.add_argument("--tile-level", type=int, required=True, help="tile level n")
    p = add("orbit", cmd_orbit, formats=graph_formats)
    p.add_argument("--base", required=True, help="letter word such as 010")
    p.add_argument("--include-identity", action="store_true")
    p = add("examples", cmd_examples, with_input=False, help="list or dump built-in examples")
    p.add_argument("action", choices=("list", "dump"))
    p.add_argument("name", nargs="?", choices=examples.NAMES)
    return parser


def _context(args) -> dict:
    ctx = {"command": args.command}
    for key in ("example", "file", "level", "tile_level", "word", "input", "base"):
        value = getattr(args, key, None)
        if value is not None:
            ctx[key] = value
    if getattr(args, "stdin", False):
        ctx["stdin"] = True
    return ctx


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = args.func(args)
    except AutomatonError as exc:
        error = {"code": getattr(exc, "code", "automaton"), "message": str(exc), "context": _context(args)}
        sys.stderr.write(_dumps(error))
        return 1
    sys.stdout.buffer.write(out.encode("utf-8"))
    sys.stdout.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
