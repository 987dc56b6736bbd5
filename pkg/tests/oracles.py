"""Independent reference implementations used to derive expected values.

Everything here works on plain dicts and follows the set-builder definitions
word for word: enumerate the whole space, keep what the definition admits.
Nothing is imported from the package except the value types.
"""
import itertools

from compsem.relations import Relation


def space(index, dom):
    index = sorted(index, key=str)
    return [dict(zip(index, vals)) for vals in itertools.product(sorted(dom), repeat=len(index))]


def restrict(t, sub):
    return {k: t[k] for k in sub}


def members(r):
    return [dict(zip(r.index, row)) for row in r.content]


def holds(r, t):
    return any(m == t for m in members(r))


def make(index, dom, dicts):
    return Relation(tuple(index), dom, [dict(d) for d in dicts])


def bowtie(r0, r1):
    idx = set(r0.index) | set(r1.index)
    return make(idx, r0.domain, [t for t in space(idx, r0.domain)
                                 if holds(r0, restrict(t, r0.index)) and holds(r1, restrict(t, r1.index))])


def oplus(r0, r1):
    idx = set(r0.index) | set(r1.index)
    return make(idx, r0.domain, [t for t in space(idx, r0.domain)
                                 if holds(r0, restrict(t, r0.index)) or holds(r1, restrict(t, r1.index))])


def complement(r):
    return make(r.index, r.domain, [t for t in space(r.index, r.domain) if not holds(r, t)])


def project(r, sub):
    return make(sub, r.domain, [restrict(t, sub) for t in members(r)])


def cylinder(r, idx):
    return make(idx, r.domain, [t for t in space(idx, r.domain) if holds(r, restrict(t, r.index))])


def compose(r0, r1, label=lambda e: e):
    # (d0 |> d1)(s) = d1(d0(s)), the element d0(s) read as a label of r1
    out = []
    for d0 in members(r0):
        for d1 in members(r1):
            out.append({s: d1[label(v)] for s, v in d0.items()})
    return make(r0.index, r1.domain, out)


# -- satisfaction over plain environments --------------------------------------

from compsem.syntax import And, App, Atom, Const, Exists, Forall, Not, Or, Var, free_vars  # noqa: E402


def value(t, interp, env):
    if isinstance(t, Var):
        return env[t.name]
    if isinstance(t, Const):
        return interp.consts[t.name]
    args = tuple(value(a, interp, env) for a in t.args)
    table = interp.funcs[t.fn]
    return dict(table.graph)[args]


def sat(f, interp, env):
    if isinstance(f, Atom):
        return tuple(value(a, interp, env) for a in f.args) in interp.preds[f.pred].content
    if isinstance(f, Not):
        return not sat(f.body, interp, env)
    if isinstance(f, And):
        return sat(f.left, interp, env) and sat(f.right, interp, env)
    if isinstance(f, Or):
        return sat(f.left, interp, env) or sat(f.right, interp, env)
    results = []
    for vals in itertools.product(sorted(interp.universe), repeat=len(f.vars)):
        inner = dict(env)
        inner.update(zip(f.vars, vals))
        results.append(sat(f.body, interp, inner))
    return any(results) if isinstance(f, Exists) else all(results)


def denotation(f, interp):
    fv = sorted(free_vars(f))
    return make(fv, interp.universe, [e for e in space(fv, interp.universe) if sat(f, interp, e)])
