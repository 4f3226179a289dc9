"""Scenario files, the lift pipeline and the verification suite."""
import ast
import json
import random
import re
from fractions import Fraction

from . import __version__, ffla
from .factorization import (CertificateError, DatumSkeleton, SpectralElement, block_decompose,
                            check_def41, depth_of, direct_sum_data, howe_factorize, random_isometry,
                            validate_prime_bound)
from .finiteweil import (FiniteForm, FiniteWeilError, ResidueHeisenberg, build_weil,
                         character_table, check_invariants, check_special_morphism,
                         diagonalization_oracle, finite_field, full_decomposition, group_table,
                         isometry_group, lift_depth_zero_datum, FiniteSymplecticSpace,
                         vertex_residue_forms)
from .hermitian import (HermitianSpace, hyperbolic_gram, make_algebra, orthogonal_sum,
                        witt_add, witt_class_of_entries, witt_invariants, witt_subtract)
from .lattice import NotGoodLattice, SplitLatticeFunction, TensorLattice, is_self_dual, moy_prasad_member
from .localfield import PrecisionError
from .matrix import Mat
from .momentmap import (DualPairContext, PreconditionError, corrupt, jump_shift_ok,
                        lift_positive_block, perturbations, random_lie, solve_moment,
                        verify_orbit_structure, _vanishes)

FORMAT_VERSION = 1
SECTIONS = ("tower", "algebra", "space", "datum", "target", "checks", "weil")
BUNDLES = ("lattice", "factorization", "momentmap", "finite-weil", "pipeline")
INPUT_ERRORS = (PrecisionError, PreconditionError, CertificateError, NotGoodLattice,
                FiniteWeilError, ZeroDivisionError)


class ScenarioError(ValueError):
    def __init__(self, msg, line=None, field=None):
        where = []
        if line is not None:
            where.append("line %d" % line)
        if field is not None:
            where.append(field)
        super().__init__("%s: %s" % (", ".join(where), msg) if where else msg)
        self.line = line
        self.field = field


# ---------------------------------------------------------------- parsing

def parse_text(text):
    """{section: {key: (value, line)}} plus the format version."""
    data = {}
    cur = None
    version = None
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"\[([a-z\-]+)\]", line)
        if m:
            cur = m.group(1)
            if cur not in SECTIONS:
                raise ScenarioError("unknown section [%s]" % cur, no)
            if cur in data:
                raise ScenarioError("duplicate section [%s]" % cur, no)
            data[cur] = {}
            continue
        if "=" not in line:
            raise ScenarioError("expected 'key = value'", no)
        k, v = (x.strip() for x in line.split("=", 1))
        if cur is None:
            if k != "version":
                raise ScenarioError("only 'version' may precede the first section", no, k)
            try:
                version = int(v)
            except ValueError:
                raise ScenarioError("version must be an integer", no, "version")
            continue
        if k in data[cur]:
            raise ScenarioError("duplicate key", no, "%s.%s" % (cur, k))
        data[cur][k] = (v, no)
    if version is None:
        raise ScenarioError("missing 'version' line")
    if version != FORMAT_VERSION:
        raise ScenarioError("version mismatch: file has %d, reader supports %d" % (version, FORMAT_VERSION))
    return data


class Scenario:
    def __init__(self, data, name="scenario"):
        self.name = name
        self.data = data

    @classmethod
    def from_text(cls, text, name="scenario"):
        return cls(parse_text(text), name)

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            text = fh.read()
        return cls.from_text(text, str(path).rsplit("/", 1)[-1])

    def has(self, section):
        return section in self.data

    def get(self, section, key, default=None, required=False):
        if section not in self.data:
            if required:
                raise ScenarioError("missing section [%s]" % section, field=section)
            return default
        if key not in self.data[section]:
            if required:
                raise ScenarioError("missing key", field="%s.%s" % (section, key))
            return default
        return self.data[section][key][0]

    def line(self, section, key):
        try:
            return self.data[section][key][1]
        except KeyError:
            return None

    def int(self, section, key, default=None, required=False):
        v = self.get(section, key, default, required)
        if v is None or isinstance(v, int):
            return v
        try:
            return int(v)
        except ValueError:
            raise ScenarioError("expected an integer", self.line(section, key), "%s.%s" % (section, key))

    def to_text(self):
        out = ["version = %d" % FORMAT_VERSION]
        for sec in SECTIONS:
            if sec not in self.data:
                continue
            out.append("")
            out.append("[%s]" % sec)
            for k, (v, _) in self.data[sec].items():
                out.append("%s = %s" % (k, v))
        return "\n".join(out) + "\n"

    def with_precision(self, N):
        data = {s: dict(d) for s, d in self.data.items()}
        data.setdefault("tower", {})["N"] = (str(N), None)
        return Scenario(data, self.name)


def _split_list(s):
    s = s.strip()
    if not s or s == "none":
        return []
    return [x.strip() for x in s.split(",")]


class ElementParser:
    """Arithmetic expressions in p, pi, w (unramified generator), d (fixed
    tau-anti-invariant element) and rationals, evaluated exactly in the tower."""

    def __init__(self, alg):
        T = alg.tower
        self.T = T
        self.names = {"p": T(T.p), "pi": T.pi()}
        if T.f == 2:
            self.names["w"] = T.omega()
        if alg.kind != "split":
            self.names["d"] = alg.delta()

    def __call__(self, text, where=None):
        try:
            node = ast.parse(text, mode="eval").body
            return self.T(0) + self._ev(node)
        except ScenarioError:
            raise
        except (SyntaxError, ValueError, TypeError, KeyError, ZeroDivisionError) as ex:
            line, field = where if where else (None, None)
            raise ScenarioError("cannot evaluate %r (%s)" % (text, ex), line, field)

    def _ev(self, n):
        if isinstance(n, ast.Constant) and isinstance(n.value, int):
            return Fraction(n.value)
        if isinstance(n, ast.Name):
            if n.id not in self.names:
                raise KeyError("unknown symbol %s" % n.id)
            return self.names[n.id]
        if isinstance(n, ast.UnaryOp) and isinstance(n.op, (ast.USub, ast.UAdd)):
            v = self._ev(n.operand)
            return -v if isinstance(n.op, ast.USub) else v
        if isinstance(n, ast.BinOp):
            a, b = self._ev(n.left), self._ev(n.right)
            if isinstance(n.op, ast.Add):
                return a + b
            if isinstance(n.op, ast.Sub):
                return a - b
            if isinstance(n.op, ast.Mult):
                return a * b
            if isinstance(n.op, ast.Div):
                if isinstance(a, Fraction) and isinstance(b, Fraction):
                    return a / b
                return (self.T(0) + a) / b
            if isinstance(n.op, ast.Pow):
                if not (isinstance(b, Fraction) and b.denominator == 1):
                    raise ValueError("exponent must be an integer")
                if isinstance(a, Fraction):
                    return a ** int(b)
                return a ** int(b)
        raise ValueError("unsupported expression")


# ---------------------------------------------------------------- building objects

class Built:
    pass


def build(sc, seed=0):
    """Tower, algebra, V, the datum skeleton and the target Witt class."""
    b = Built()
    p = sc.int("tower", "p", required=True)
    N = sc.int("tower", "N", 12)
    e = sc.int("tower", "e", 1)
    kind = sc.get("algebra", "kind", required=True)
    if kind not in ("split", "unramified", "ramified"):
        raise ScenarioError("kind must be split, unramified or ramified", sc.line("algebra", "kind"), "algebra.kind")
    from .localfield import make_tower, is_prime
    if not is_prime(p) or p == 2:
        raise ScenarioError("p must be an odd prime", sc.line("tower", "p"), "tower.p")
    if N < 4:
        raise PrecisionError("precision N=%d is below the supported minimum 4" % N)
    tower = make_tower(p, 1, e, N) if (kind == "split" and e > 1) else None
    alg = make_algebra(kind, p, N, tower=tower)
    b.alg = alg
    b.N = N
    ep = ElementParser(alg)
    b.parse = ep
    eps = sc.int("space", "eps", required=True)
    if eps not in (1, -1):
        raise ScenarioError("eps must be 1 or -1", sc.line("space", "eps"), "space.eps")
    k = sc.int("space", "hyperbolic", 0)
    lines = [ep(x, (sc.line("space", "lines"), "space.lines")) for x in _split_list(sc.get("space", "lines", ""))]
    T = alg.tower
    V = HermitianSpace(alg, eps, hyperbolic_gram(alg, eps, k)) if k else None
    for a in lines:
        try:
            L = HermitianSpace(alg, eps, Mat(T, [[a]]))
        except ValueError as ex:
            raise ScenarioError(str(ex), sc.line("space", "lines"), "space.lines")
        V = L if V is None else orthogonal_sum(V, L)
    if V is None:
        raise ScenarioError("empty space", sc.line("space", "eps"), "space")
    b.V = V
    b.prime_bound = validate_prime_bound(p, V.dim, alg.e_D)
    try:
        grads = [Fraction(x) for x in _split_list(sc.get("datum", "gradings", required=True))]
    except ValueError:
        raise ScenarioError("gradings must be rationals", sc.line("datum", "gradings"), "datum.gradings")
    eigs = [ep(x, (sc.line("datum", "eigenvalues"), "datum.eigenvalues"))
            for x in _split_list(sc.get("datum", "eigenvalues", required=True))]
    if len(grads) != V.dim or len(eigs) != V.dim:
        raise ScenarioError("need %d gradings and eigenvalues" % V.dim, sc.line("datum", "eigenvalues"), "datum")
    P = V.identity()
    conj = sc.get("datum", "conjugate", "none")
    if conj != "none":
        P = random_isometry(V, random.Random(int(conj)), 1)
    x = SplitLatticeFunction(V, P, grads)
    if not is_self_dual(x):
        raise ScenarioError("gradings do not give a self-dual lattice function", sc.line("datum", "gradings"), "datum.gradings")
    G = SpectralElement.from_diagonal(V, P, eigs)
    rho = sc.get("datum", "rho", "auto")
    try:
        b.rho0 = None if rho == "auto" else tuple(int(v) for v in _split_list(rho))
    except ValueError:
        raise ScenarioError("rho must be auto or two indices", sc.line("datum", "rho"), "datum.rho")
    if b.rho0 is not None and len(b.rho0) != 2:
        raise ScenarioError("rho must be auto or two indices", sc.line("datum", "rho"), "datum.rho")
    b.skeleton = DatumSkeleton(x, G, {"label": "1"}, {"label": rho})
    b.w_mode = sc.get("datum", "w", "identity")
    if b.w_mode not in ("identity", "corrupt"):
        raise ScenarioError("w must be identity or corrupt", sc.line("datum", "w"), "datum.w")
    b.target = None
    if sc.has("target"):
        teps = sc.int("target", "eps", -eps)
        ents = [ep(v, (sc.line("target", "entries"), "target.entries"))
                for v in _split_list(sc.get("target", "entries", ""))]
        if teps not in (1, -1):
            raise ScenarioError("eps must be 1 or -1", sc.line("target", "eps"), "target.eps")
        try:
            Tp = witt_class_of_entries(alg, teps, ents)
        except ValueError as ex:
            raise ScenarioError("entries do not define a %+d-Hermitian form (%s)" % (teps, ex),
                                sc.line("target", "entries"), "target.entries")
        base = sc.get("target", "base", "zero")
        if base == "gamma":
            from .momentmap import gamma_class_space
            pos = [bl for bl in block_decompose(b.skeleton) if bl.depth > 0]
            for bl in pos:
                Tp = witt_add(Tp, witt_invariants(gamma_class_space(bl.space, bl.gamma.matrix)))
        elif base != "zero":
            raise ScenarioError("base must be zero or gamma", sc.line("target", "base"), "target.base")
        b.target = Tp
    return b


# ---------------------------------------------------------------- pipeline

def _s(x):
    return str(x)


def _mat_s(M):
    return [[str(x) for x in row] for row in M.rows]


def _form_s(f):
    return {"kind": f.kind, "sign": f.sign, "dim": f.dim, "gram": f.gram}


def _zero_block_forms(S):
    return vertex_residue_forms(S.x)


def assemble_w(blocks, lifted, Vp):
    """w = sum of the blockwise w, in the coordinates of V and V'."""
    T = Vp.tower
    cols = []
    Pcols = []
    roff = 0
    rows_total = Vp.dim
    for bl, (w, dp) in zip(blocks, lifted):
        n = bl.space.dim
        for j in range(n):
            col = [T.zero()] * rows_total
            for i in range(dp):
                if w is not None:
                    col[roff + i] = w[i, j]
            cols.append(col)
        for j in range(n):
            Pcols.append([bl.embedding[i, j] for i in range(bl.embedding.shape[0])])
        roff += dp
    n = len(cols)
    W = Mat(T, [[cols[j][i] for j in range(n)] for i in range(rows_total)])
    P = Mat(T, [[Pcols[j][i] for j in range(n)] for i in range(n)])
    return W * P.inverse()


def lift_datum(S, Tp, rho0=None, w_mode="identity", rng=None):
    """Blockwise lift: transport on positive blocks, finite theta on the
    depth-zero block relative to the residual class, then the direct sum."""
    blocks = block_decompose(S)
    pos = [b for b in blocks if b.depth > 0]
    zero = [b for b in blocks if b.depth == 0]
    transports = []
    residual = Tp
    for b in pos:
        res = lift_positive_block(b)
        if w_mode == "corrupt":
            res = corrupt(res, rng or random.Random(0))
        transports.append(res)
        residual = witt_subtract(residual, witt_invariants(res.Vp))
    zb = zero[0]
    z = lift_depth_zero_datum(zb, residual, rho0)
    parts = [t.skeleton for t in transports] + [z["skeleton"]]
    Sp = direct_sum_data(parts)
    Vp = Sp.space
    dims = [(t.w, t.Vp.dim) for t in transports] + [(None, z["space"].dim)]
    w = assemble_w(pos + [zb], dims, Vp)
    ctx = DualPairContext(S.space, Vp)
    gamma_p = -Sp.gamma.matrix
    m_ok = moy_prasad_member(ctx.moment(w) - S.gamma.matrix, S.x, 0, "g")
    mp_ok = moy_prasad_member(ctx.moment_p(w) - gamma_p, Sp.x, 0, "g")
    witt_ok = witt_invariants(Vp) == Tp
    report = {
        "blocks": [{"depth": _s(b.depth), "dim": b.space.dim} for b in blocks],
        "positive": [dict(t.serialize(), depth_preserved=(t.skeleton.depth == t.source.depth))
                     for t in transports],
        "residual_class": residual.describe(),
        "zero_block": {
            "ell": _form_s(z["ell"]), "ell_star": _form_s(z["ell_star"]),
            "rho": list(z["rho"]), "rho_cuspidal": z["rho_cuspidal"],
            "ell_prime": _form_s(z["ell_prime"]), "ell_prime_star": _form_s(z["ell_prime_star"]),
            "lifts": {k: {kk: (vv if kk != "space" else _form_s(vv)) for kk, vv in v.items()}
                      for k, v in sorted(z["lifts"].items())},
            "dims_ok": z["dims_ok"],
        },
        "V_prime": {"dim": Vp.dim, "gram": _mat_s(Vp.gram), "witt": witt_invariants(Vp).describe()},
        "x_prime_gradings": [_s(c) for c in Sp.x.gradings],
        "target": Tp.describe(),
        "witt_ok": witt_ok,
        "moment_congruence": {"M(w)=Gamma mod g_x,0": m_ok, "M'(w)=Gamma' mod g'_x',0": mp_ok},
    }
    return {"report": report, "skeleton": Sp, "w": w, "transports": transports, "zero": z,
            "residual": residual, "space": Vp,
            "pass": bool(witt_ok and m_ok and mp_ok and z["dims_ok"]
                         and all(r["depth_preserved"] for r in report["positive"]))}


# ---------------------------------------------------------------- check bundles

def bundle_lattice(b, rng, opts):
    out = []
    for blk in block_decompose(b.skeleton):
        if blk.depth <= 0:
            continue
        res = lift_positive_block(blk)
        s = res.s
        xp = res.xp
        pert = perturbations(xp, opts["perturbations"], rng)
        tl = TensorLattice(blk.x, xp)
        fail_iii = all(TensorLattice(blk.x, q).level(res.w) < -s for q in pert)
        item = {
            "depth": _s(blk.depth),
            "self_dual_x": is_self_dual(blk.x),
            "self_dual_x_prime": is_self_dual(xp),
            "jump_shift": jump_shift_ok(blk.x, xp, s),
            "w_in_level_minus_s": tl.level(res.w) >= -s,
            "perturbations": len(pert),
            "perturbations_fail_containment": fail_iii,
        }
        item["pass"] = all(v for k, v in item.items() if isinstance(v, bool))
        out.append(item)
    return {"pass": all(i["pass"] for i in out), "blocks": out}


def bundle_factorization(b, rng, opts):
    G = b.skeleton.gamma
    fac = howe_factorize(G)
    chk = check_def41(fac)
    rem = fac.remainder
    again = howe_factorize(rem)
    ok_rem = depth_of(rem) >= 0 and all(r <= 0 or t.matrix.is_zero() for t, r in again.terms)
    return {"pass": all(chk.values()) and bool(ok_rem), "def41": chk,
            "remainder_nonnegative_depth": bool(ok_rem), "factorization": fac.serialize()}


def bundle_momentmap(b, rng, opts):
    out = []
    for blk in block_decompose(b.skeleton):
        if blk.depth <= 0:
            continue
        res = lift_positive_block(blk)
        ctrl = b.w_mode == "corrupt"
        if ctrl:
            res = corrupt(res, rng)
        preds = verify_orbit_structure(res, rng, samples=opts["samples"], pairs=opts["pairs"])
        verdicts = {k: bool(v["pass"]) for k, v in preds.items()}
        item = {"depth": _s(blk.depth), "predicates": preds, "verdicts": verdicts}
        if ctrl:
            failed = sorted(k for k, v in verdicts.items() if not v)
            item["negative_control"] = {"expected_failures": ["2_iota_isometry"], "observed_failures": failed}
            item["pass"] = failed == ["2_iota_isometry"]
        else:
            solves = []
            ctx = DualPairContext(blk.space, res.Vp)
            for t0 in (Fraction(1, 2), Fraction(1)):
                delta = random_lie(blk.x, -res.s + t0, rng)
                target = blk.gamma.matrix + delta
                tr = []
                w, it, bound = solve_moment(ctx, res.w, target, blk.x, res.r, t0, res.fac, opts["solver_N"], trace=tr)
                solves.append({"t0": _s(t0), "iterations": it, "bound": bound,
                               "residual_vanishes": _vanishes(ctx.moment(w) - target, opts["solver_N"]),
                               "trace": [_s(v) for v in tr]})
            item["solver"] = solves
            item["pass"] = all(verdicts.values()) and all(s["residual_vanishes"] and s["iterations"] <= s["bound"]
                                                           for s in solves)
        out.append(item)
    return {"pass": all(i["pass"] for i in out), "blocks": out}


def weil_checks(q, n, rng, pairs=None):
    """Dimension, Heisenberg relation, homomorphism and W+-invariants."""
    import itertools
    import numpy as np
    F = finite_field(q)
    S = FiniteSymplecticSpace(F, n)
    R = build_weil(S)
    out = {"q": q, "dim_W": 2 * n, "dimension": R.size, "dimension_ok": R.size == q ** n}
    worst = 0.0
    vecs = list(itertools.product(range(q), repeat=2 * n))
    half = F.inv(F(2))
    for v1 in vecs:
        for v2 in vecs:
            lhs = R.heis(v1[:n], v1[n:]) @ R.heis(v2[:n], v2[n:])
            s = [F.add(a, c) for a, c in zip(v1, v2)]
            rhs = S.psi[F.mul(half, S.form(list(v1), list(v2)))] * R.heis(s[:n], s[n:])
            worst = max(worst, float(np.abs(lhs - rhs).max()))
    out["heisenberg_pairs"] = len(vecs) ** 2
    out["heisenberg_max_dev"] = worst
    if n == 1:
        G = isometry_group(FiniteForm(F, [[0, 1], [F.neg(1), 0]], -1))
        els = G.elements
        prs = [(g, h) for g in els for h in els]
    else:
        from .finiteweil import random_sp
        els = [random_sp(F, n, rng) for _ in range(12)]
        prs = [(g, h) for g in els for h in els]
    worst = 0.0
    for g, h in prs:
        gh = ffla.matmul(F, [list(r) for r in g], [list(r) for r in h])
        worst = max(worst, float(np.abs(R.omega(g) @ R.omega(h) - R.omega(gh)).max()))
    out["homomorphism_pairs"] = len(prs)
    out["homomorphism_max_dev"] = worst
    out["invariants_max_dev"] = max(check_invariants(F, n, k, rng, 6) for k in range(1, n + 1))
    out["pass"] = bool(out["dimension_ok"] and out["heisenberg_max_dev"] < 1e-6
                       and out["homomorphism_max_dev"] < 1e-6 and out["invariants_max_dev"] < 1e-6)
    return out


def bundle_finite_weil(b, rng, opts):
    out = {"weil": weil_checks(opts["weil_q"], opts["weil_n"], rng)}
    zb = [blk for blk in block_decompose(b.skeleton) if blk.depth == 0][0]
    l, ls = _zero_block_forms(zb)
    theta = []
    for f in (l, ls):
        if f.dim == 0:
            continue
        T = group_table(f)
        item = {"form": _form_s(f), "table": T.to_json()}
        theta.append(item)
    out["residue_tables"] = theta
    specials = []
    for blk in block_decompose(b.skeleton):
        if blk.depth <= 0:
            continue
        W = ResidueHeisenberg(blk.space, blk.x, blk.gamma.matrix, blk.depth / 2)
        fails = check_special_morphism(W, rng, 5)
        specials.append({"depth": _s(blk.depth), "dim_W": W.dim, "failures": len(fails)})
    out["special_morphism"] = specials
    out["pass"] = out["weil"]["pass"] and all(s["failures"] == 0 for s in specials)
    return out


def bundle_pipeline(b, rng, opts):
    if b.target is None:
        raise ScenarioError("a lift needs a [target] section", field="target")
    res = lift_datum(b.skeleton, b.target, b.rho0, "identity", rng)
    rep = res["report"]
    return dict(rep, **{"pass": res["pass"]})


BUNDLE_FUNCS = {
    "lattice": bundle_lattice,
    "factorization": bundle_factorization,
    "momentmap": bundle_momentmap,
    "finite-weil": bundle_finite_weil,
    "pipeline": bundle_pipeline,
}


def options(sc):
    return {
        "samples": sc.int("checks", "samples", 100),
        "pairs": sc.int("checks", "pairs", 6),
        "perturbations": sc.int("checks", "perturbations", 10),
        "solver_N": sc.int("checks", "solver_N", 8),
        "weil_q": sc.int("weil", "q", 3),
        "weil_n": sc.int("weil", "n", 1),
    }


def requested_checks(sc, override=None):
    if override is not None:
        names = override
    else:
        names = _split_list(sc.get("checks", "bundles", ",".join(BUNDLES)))
    for n in names:
        if n not in BUNDLES:
            raise ScenarioError("unknown check bundle %r" % n, sc.line("checks", "bundles"), "checks.bundles")
    return names


def header(sc, b, seed):
    return {"scenario": sc.name, "format_version": FORMAT_VERSION, "package_version": __version__,
            "seed": seed, "rng": "python-random-mt19937", "precision_N": b.N,
            "prime_bound_ok": b.prime_bound}


def run_verification_suite(sc, seed=0, checks=None):
    names = requested_checks(sc, checks)
    out = {"checks": {}}
    if not names:
        out["pass"] = True
        return out
    b = build(sc, seed)
    out.update(header(sc, b, seed))
    for n in names:
        rng = random.Random("%d:%s" % (seed, n))
        out["checks"][n] = BUNDLE_FUNCS[n](b, rng, options(sc))
    out["pass"] = all(v["pass"] for v in out["checks"].values())
    return out


# ---------------------------------------------------------------- output

def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    if hasattr(x, "item"):
        return x.item()
    return str(x)


def dumps(report):
    return json.dumps(_jsonable(report), sort_keys=True, indent=2) + "\n"


def emit(report, path):
    with open(path, "w") as fh:
        fh.write(dumps(report))


def summary(report, title="report"):
    lines = ["%s: %s" % (title, "PASS" if report.get("pass") else "FAIL")]
    for k, v in sorted(report.get("checks", {}).items()):
        lines.append("  %-14s %s" % (k, "pass" if v.get("pass") else "FAIL"))
    return "\n".join(lines)
