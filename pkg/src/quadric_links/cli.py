"""Command-line front end, fixture corpus and verification suites.

Exit status: 0 success, 1 invalid input, 2 refused computation (size cap),
3 internal invariant violation.
"""
import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import cohomology as coh
from . import configurations as conf
from . import polytopes as poly
from . import surgery
from .errors import InvalidFlip, InvalidInput, InvariantViolation, QuadricLinksError, RefusedComputation
from .homology import SimplicialComplex, SubsetHomology, members_of
from .kernel import as_rational, format_rational

__all__ = ["Fixture", "corpus", "fixture", "load_input", "run_suites", "SUITES", "main"]


# ---------------------------------------------------------------- corpus


@dataclass(frozen=True)
class Fixture:
    """A named input: a polytope, configuration, crossing path or complex."""

    name: str
    kind: str
    value: object
    translation: Optional[Tuple[Fraction, ...]] = None

    def to_json(self) -> dict:
        if self.kind == "path":
            return {"kind": "path", "configuration": self.value.to_json(), "translation": [format_rational(x) for x in self.translation]}
        return {"kind": self.kind, **self.value.to_json()}


def _data(name: str) -> dict:
    return json.loads(resources.files("quadric_links").joinpath("data", name).read_text())


def _from_data(name: str) -> Fixture:
    return parse_input(_data(name), name.rsplit(".", 1)[0])


def _builders() -> Dict[str, Callable[[], Fixture]]:
    def polytope(key):
        return lambda: Fixture(key.replace(":", "_"), "polytope", poly.builtin(key))

    table = {}
    for key in ["simplex:1", "simplex:2", "simplex:3", "simplex:4", "square", "pentagon", "hexagon", "prism", "cube", "truncated_cube", "rp2_truncation"]:
        name = key.replace(":", "_")
        table[name] = polytope(key)
    for l in range(3, 7):
        table[f"book_{l}"] = polytope(f"book:{l}")
    for v in range(5, 9):
        table[f"cyclic_dual_4_{v}"] = polytope(f"cyclic_dual:4:{v}")
    for q in (2, 3):
        for l in range(1, 5):
            table[f"truncated_simplex_{q}_{l}"] = lambda q=q, l=l: Fixture(
                f"truncated_simplex_{q}_{l}", "polytope", _vertex_truncated_simplex(q, l)
            )
    for file in ["pentagon_configuration.json", "two_wall_path.json", "two_wall_start.json", "two_wall_middle.json",
                 "two_wall_end.json", "p1_path.json", "p1_2_2.json", "p1_3_3.json", "p1_2_4.json", "p2_equal_weights.json",
                 "rp2_triangulation.json", "circle_complex.json", "edge_complex.json"]:
        table[file[:-5]] = lambda file=file: _from_data(file)
    return table


def _vertex_truncated_simplex(q: int, l: int) -> poly.CombPolytope:
    """Δ^q with l successive vertex cuts, each at a vertex created by the previous cut."""
    cur = poly.simplex(q)
    for t in range(l):
        target = sorted(tuple(sorted(f)) for f in cur.dual_facets if cur.n in f or t == 0)[0]
        cur = poly.truncate_face(cur, list(target))
    return cur


CORPUS_NAMES = tuple(_builders())


def fixture(name: str) -> Fixture:
    table = _builders()
    if name not in table:
        raise InvalidInput(f"unknown fixture {name!r}; known: {', '.join(table)}")
    return table[name]()


def corpus() -> List[Fixture]:
    """Every fixture, in a fixed order."""
    return [build() for build in _builders().values()]


# ---------------------------------------------------------------- input


def parse_input(data: dict, name: str = "input") -> Fixture:
    if not isinstance(data, dict):
        raise InvalidInput("input JSON must be an object")
    if "translation" in data and "configuration" in data:
        c = conf.Configuration.from_json(data["configuration"])
        v = tuple(as_rational(x) for x in data["translation"])
        return Fixture(name, "path", c, v)
    if "columns" in data:
        return Fixture(name, "configuration", conf.Configuration.from_json(data))
    if "dual_facets" in data:
        return Fixture(name, "polytope", poly.CombPolytope.from_json(data))
    if "maximal_faces" in data:
        return Fixture(name, "complex", SimplicialComplex.from_json(data))
    raise InvalidInput("unrecognised JSON: expected 'columns', 'dual_facets', 'maximal_faces' or 'configuration' + 'translation'")


def load_input(source: Optional[str], builtin: Optional[str]) -> Fixture:
    """A file path, a corpus fixture name, or a builtin polytope name."""
    if builtin:
        return _named(builtin)
    if source is None:
        raise InvalidInput("an input file or --builtin is required")
    try:
        with open(source, encoding="utf-8") as handle:
            text = handle.read()
    except FileNotFoundError:
        return _named(source)
    except OSError as exc:
        raise InvalidInput(f"cannot read {source}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{source} is not valid JSON: {exc}") from exc
    return parse_input(data, source)


def _named(name: str) -> Fixture:
    if name in CORPUS_NAMES:
        return fixture(name)
    return Fixture(name, "polytope", poly.builtin(name))


def _polytope_of(f: Fixture) -> Tuple[poly.CombPolytope, Optional[conf.Configuration]]:
    if f.kind == "polytope":
        return f.value, None
    if f.kind in ("configuration", "path"):
        return poly.polytope_of(f.value), f.value
    raise InvalidInput(f"a {f.kind} is not a polytope or configuration")


def _configuration_of(f: Fixture) -> conf.Configuration:
    if f.kind in ("configuration", "path"):
        return f.value
    raise InvalidInput(f"this verb needs a configuration, got a {f.kind}")


def _csv(text: Optional[str]) -> List[str]:
    return [x.strip() for x in text.split(",") if x.strip()] if text else []


# ---------------------------------------------------------------- verification suites


def _suite_euler(p, ctx):
    chi = ctx.report().euler_characteristic()
    return chi == 0, f"Euler characteristic {chi}"


def _suite_poincare(p, ctx):
    failures = ctx.report().poincare_failures()
    return not failures, "; ".join(failures) or "Betti numbers and torsion are dual"


def _suite_link_duality(p, ctx):
    sh = SubsetHomology(p)
    checked = 0
    for mask in range(1 << p.n):
        if not sh.in_delta(mask):
            continue
        link = sh.link(mask)
        induced = sh.induced(mask)
        shift = p.d - (p.n - bin(mask).count("1")) + 1
        expect = {j - shift: g for j, g in induced.groups.items()}
        if link.groups != expect:
            return False, f"link and induced homology disagree at support {list(members_of(mask))}"
        checked += 1
    return True, f"{checked} supports agree"


def _suite_kunneth(p, ctx):
    factors = surgery.join_factors(p)
    if len(factors) == 1:
        return True, "not a product; nothing to compare"
    expect = coh.cohomology_of(factors[0], ctx.max_n).groups()
    for f in factors[1:]:
        expect = coh.kunneth_product(expect, coh.cohomology_of(f, ctx.max_n).groups())
    actual = {i: (b, coh.primary_torsion(t)) for i, (b, t) in ctx.report().groups().items()}
    return actual == expect, f"{len(factors)} factors"


def _suite_flips(p, ctx):
    """Every valid flip is undone by its reverse and changes the facet count as its type says."""
    tried = 0
    for mask in sorted(p.face_masks()):
        if not mask:
            continue
        sigma = [p.name_of(v) for v in members_of(mask)]
        try:
            move = poly.flip_spec_at(p, sigma)
            after = poly.apply_flip(p, move)
        except InvalidFlip:
            continue
        tried += 1
        a, b = move.type
        delta = after.n - p.n
        want = 1 if a == 1 else (-1 if b == 1 else 0)
        if a == 1 and b == 1:
            want = 0
        if delta != want:
            return False, f"flip {move.to_json()} changed the facet count by {delta}"
        back = poly.apply_flip(after, move.reversed())
        if back.named_facets() != p.named_facets():
            return False, f"flip {move.to_json()} is not undone by its reverse"
    return True, f"{tried} flips checked"


def _suite_dehn_sommerville(p, ctx):
    f = [1] + poly.f_vector(p)
    d = p.d
    h = [sum((-1) ** (k - i) * _binom(d - i, k - i) * f[i] for i in range(k + 1)) for k in range(d + 1)]
    return h == h[::-1], f"h-vector {h}"


def _binom(a, b):
    from math import comb

    return comb(a, b) if 0 <= b <= a else 0


SUITES: Dict[str, Callable] = {
    "euler": _suite_euler,
    "poincare": _suite_poincare,
    "link-duality": _suite_link_duality,
    "kunneth": _suite_kunneth,
    "flips": _suite_flips,
    "dehn-sommerville": _suite_dehn_sommerville,
}


class _Context:
    def __init__(self, p, max_n, threads):
        self.p, self.max_n, self.threads = p, max_n, threads
        self._report = None

    def report(self):
        if self._report is None:
            self._report = coh.cohomology_of(self.p, self.max_n, self.threads)
        return self._report


def run_suites(p: poly.CombPolytope, suites: Sequence[str], max_n: int = coh.DEFAULT_MAX_N, threads: Optional[int] = None) -> List[dict]:
    unknown = [s for s in suites if s not in SUITES]
    if unknown:
        raise InvalidInput(f"unknown suites {unknown}; known: {', '.join(SUITES)}")
    if p.n > max_n:
        raise RefusedComputation(f"the subset sweep over {p.n} facets exceeds the cap --max-n {max_n}")
    ctx = _Context(p, max_n, threads)
    out = []
    for name in suites:
        ok, detail = SUITES[name](p, ctx)
        out.append({"suite": name, "pass": bool(ok), "detail": detail})
    return out


def _verify_fixture(f: Fixture, suites, max_n, threads) -> List[dict]:
    if f.kind == "complex":
        build = surgery.torsion_build(f.value, realize_configuration=False)
        rows = run_suites(build.polytope, suites, max_n, threads)
        rows.append({"suite": "torsion-build", "pass": True, "detail": f"isomorphism found; {len(build.certificates)} certified summands"})
        return rows
    p, c = _polytope_of(f)
    rows = run_suites(p, suites, max_n, threads)
    if c is None and p.realization is not None:
        again = poly.polytope_of(poly.realize(p))
        rows.append({"suite": "realize", "pass": again.dual_facets == p.dual_facets, "detail": "polytope of the realized configuration"})
    if f.kind == "path":
        result = surgery.cross(f.value, f.translation)
        ok = all(e.flip.type == e.wall.type for e in result.events)
        rows.append({"suite": "crossings", "pass": ok, "detail": f"{len(result.events)} events, wall types match flip types: {ok}"})
    return rows


# ---------------------------------------------------------------- verbs


def _emit(args, payload, text: Optional[str] = None) -> None:
    if args.json or text is None:
        print(json.dumps(payload, indent=2, sort_keys=False, ensure_ascii=False))
    else:
        print(text)


def cmd_check(args):
    c = _configuration_of(load_input(args.input, args.builtin))
    rep = conf.check_admissible(c)
    text = f"admissible: {rep.admissible}\nindispensable: {list(rep.indispensable)}\nk = {rep.k}"
    if rep.violator is not None:
        text += f"\nweak hyperbolicity fails on columns {list(rep.violator)}"
    _emit(args, rep.to_json(), text)
    return 0


def cmd_polytope(args):
    f = load_input(args.input, args.builtin)
    p, _ = _polytope_of(f)
    payload = p.to_json()
    payload["f_vector"] = poly.f_vector(p)
    text = f"n = {p.n}, d = {p.d}, f-vector {poly.f_vector(p)}\n" + "\n".join(
        " ".join(p.name_of(v) for v in facet) for facet in p.sorted_facets()
    )
    _emit(args, payload, text)
    return 0


def cmd_realize(args):
    p, _ = _polytope_of(load_input(args.input, args.builtin))
    c = poly.realize(p, args.circles or 0)
    _emit(args, c.to_json())
    return 0


def cmd_truncate(args):
    p, _ = _polytope_of(load_input(args.input, args.builtin))
    face = _csv(args.face)
    if not face:
        raise InvalidInput("--face is required")
    _emit(args, poly.truncate_face(p, face).to_json())
    return 0


def cmd_flip(args):
    p, _ = _polytope_of(load_input(args.input, args.builtin))
    face = _csv(args.face)
    if not face:
        raise InvalidInput("--face is required")
    move = poly.flip_spec_at(p, face)
    if args.type:
        want = tuple(int(x) for x in _csv(args.type))
        if want != move.type:
            raise InvalidFlip("type", f"the flip at {face} has type {move.type}, not {want}")
    out = poly.apply_flip(p, move)
    _emit(args, {"flip": move.to_json(), "polytope": out.to_json()})
    return 0


def cmd_product(args):
    if len(args.inputs) != 2:
        raise InvalidInput("product takes two inputs")
    a, b = (load_input(x, None) for x in args.inputs)
    if a.kind == b.kind == "configuration":
        _emit(args, conf.product(a.value, b.value).to_json())
    else:
        pa, _ = _polytope_of(a)
        pb, _ = _polytope_of(b)
        _emit(args, poly.product(pa, pb).to_json())
    return 0


def cmd_cohomology(args):
    p, _ = _polytope_of(load_input(args.input, args.builtin))
    rep = coh.cohomology_of(p, args.max_n, args.threads)
    _emit(args, rep.to_json(), rep.table())
    return 0


def cmd_homology_x(args):
    p, _ = _polytope_of(load_input(args.input, args.builtin))
    groups = coh.homology_of(p, args.max_n, args.threads)
    payload = [{"degree": i, "betti": b, "torsion": list(t)} for i, (b, t) in sorted(groups.items())]
    text = "\n".join(f"H_{i:<3}= {coh._describe_group(b, t)}" for i, (b, t) in sorted(groups.items()))
    _emit(args, payload, text)
    return 0


def cmd_ring(args):
    p, _ = _polytope_of(load_input(args.input, args.builtin))
    ring = coh.CupRing(p, min(args.max_n, coh.DEFAULT_PRODUCT_MAX_N) if args.max_n == coh.DEFAULT_MAX_N else args.max_n)
    rows = ring.table()
    text = "\n".join(f"{r['a']} ⌣ {r['b']} = {r['result']}" for r in rows) or "all products of non-unit generators vanish"
    _emit(args, {"products": rows}, text)
    return 0


def cmd_classify(args):
    p, _ = _polytope_of(load_input(args.input, args.builtin))
    out = coh.classify_ring(p, coh.cohomology_of(p, args.max_n, args.threads))
    text = "\n".join(f"{k}: {v}" for k, v in out.items())
    _emit(args, out, text)
    return 0


def cmd_walls(args):
    f = load_input(args.input, args.builtin)
    c = _configuration_of(f)
    walls = surgery.enumerate_walls(c)
    payload = {"walls": [w.to_json(c.labels) for w in walls]}
    lines = [f"{','.join(c.labels[i - 1] for i in w.indices)}  type {w.type}" for w in walls]
    translation = _translation(args, f)
    if translation is not None:
        result = surgery.cross(c, translation)
        payload["crossing"] = result.to_json()
        lines += [_event_line(c, e) for e in result.events]
    _emit(args, payload, "\n".join(lines) or "no walls")
    return 0


def _translation(args, f: Fixture):
    if args.translate:
        return tuple(as_rational(x) for x in _csv(args.translate))
    return f.translation


def _event_line(c, e) -> str:
    return (
        f"t = {format_rational(e.time)}: wall {','.join(c.labels[i - 1] for i in e.wall.indices)} type {e.wall.type}; "
        f"flip {list(e.flip.face_out)} -> {list(e.flip.face_in)} type {e.flip.type}; facets {e.before.n} -> {e.after.n}"
    )


def cmd_cross(args):
    f = load_input(args.input, args.builtin)
    c = _configuration_of(f)
    translation = _translation(args, f)
    if translation is None:
        raise InvalidInput("--translate is required")
    result = surgery.cross(c, translation)
    lines = [_event_line(c, e) for e in result.events] or ["no wall is crossed"]
    lines.append("types: " + "; ".join(
        surgery.diffeo_type(None, c.translate(tuple(Fraction(t) * x for x in translation))).describe()
        for t in _sample_times(result)
    ))
    _emit(args, result.to_json(), "\n".join(lines))
    return 0


def _sample_times(result) -> List[Fraction]:
    times = [Fraction(0)] + [e.time for e in result.events] + [Fraction(1)]
    return [(a + b) / 2 for a, b in zip(times, times[1:])]


def cmd_diffeo(args):
    f = load_input(args.input, args.builtin)
    if f.kind in ("configuration", "path"):
        out = surgery.diffeo_type(None, f.value)
    else:
        p, _ = _polytope_of(f)
        out = surgery.diffeo_type(p, circles=args.circles or 0)
    _emit(args, out.to_json(), out.describe())
    return 0


def cmd_torsion_build(args):
    f = load_input(args.input, args.builtin)
    if f.kind != "complex":
        raise InvalidInput("torsion-build needs a simplicial complex")
    build = surgery.torsion_build(f.value, even=args.even, realize_configuration=not args.no_realize)
    lines = [f"{build.method}: n = {build.polytope.n}, d = {build.polytope.d}, dim X = {build.dim_x}"]
    for cert in build.certificates:
        lines.append(
            f"H~_{cert['complex_degree']}(K) = {coh._describe_group(cert['betti'], cert['torsion'])} "
            f"is a summand of H^{cert['cohomology_degree']} at support {cert['support']}"
        )
    _emit(args, build.to_json(), "\n".join(lines))
    return 0


def cmd_lvm(args):
    c = _configuration_of(load_input(args.input, args.builtin))
    out = conf.lvm_report(c)
    _emit(args, out, "\n".join(f"{k}: {v}" for k, v in out.items()))
    return 0


def cmd_verify(args):
    suites = _csv(args.suite) or list(SUITES)
    targets = [load_input(args.input, args.builtin)] if (args.input or args.builtin) else corpus()
    report = []
    ok = True
    for f in targets:
        rows = _verify_fixture(f, suites, args.max_n, args.threads)
        ok &= all(r["pass"] for r in rows)
        report.append({"fixture": f.name, "results": rows})
    lines = []
    for entry in report:
        for r in entry["results"]:
            lines.append(f"{'PASS' if r['pass'] else 'FAIL'}  {entry['fixture']:<28} {r['suite']:<17} {r['detail']}")
    _emit(args, {"pass": ok, "fixtures": report}, "\n".join(lines))
    if not ok:
        raise InvariantViolation("verification failed")
    return 0


def cmd_builtin(args):
    name = args.input or args.builtin
    if not name:
        names = list(CORPUS_NAMES) + [n for n in poly.BUILTIN_NAMES]
        _emit(args, {"fixtures": list(CORPUS_NAMES), "builtin_polytopes": list(poly.BUILTIN_NAMES)}, "\n".join(names))
        return 0
    _emit(args, _named(name).to_json())
    return 0


VERBS = {
    "check": cmd_check,
    "polytope": cmd_polytope,
    "realize": cmd_realize,
    "truncate": cmd_truncate,
    "flip": cmd_flip,
    "product": cmd_product,
    "cohomology": cmd_cohomology,
    "homology-x": cmd_homology_x,
    "ring": cmd_ring,
    "classify": cmd_classify,
    "walls": cmd_walls,
    "cross": cmd_cross,
    "diffeo": cmd_diffeo,
    "torsion-build": cmd_torsion_build,
    "lvm": cmd_lvm,
    "verify": cmd_verify,
    "builtin": cmd_builtin,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quadric-links", description="Links of real quadrics and their simple polytopes.")
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb in VERBS:
        cmd = sub.add_parser(verb)
        if verb == "product":
            cmd.add_argument("inputs", nargs="*", help="two JSON files or fixture names")
        else:
            cmd.add_argument("input", nargs="?", help="JSON file, fixture name or builtin polytope name")
        cmd.add_argument("--json", action="store_true", help="machine-readable output")
        cmd.add_argument("--max-n", type=int, default=coh.DEFAULT_MAX_N, help="cap on facets for subset sweeps")
        cmd.add_argument("--threads", type=int, default=None)
        cmd.add_argument("--suite", help="comma-separated verification suites")
        cmd.add_argument("--builtin", help="use a fixture or builtin polytope by name")
        cmd.add_argument("--translate", help="comma-separated rational translation vector")
        cmd.add_argument("--face", help="comma-separated facet labels")
        cmd.add_argument("--type", help="expected flip type a,b")
        cmd.add_argument("--circles", type=int, default=None)
        cmd.add_argument("--even", action="store_true", help="torsion-build: force an even-dimensional link")
        cmd.add_argument("--no-realize", action="store_true", help="torsion-build: skip the configuration")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return VERBS[args.verb](args)
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 3
    except RefusedComputation as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 2
    except (InvalidInput, QuadricLinksError) as exc:
        extra = f" [{exc.condition}]" if isinstance(exc, InvalidFlip) else ""
        print(f"invalid input{extra}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
