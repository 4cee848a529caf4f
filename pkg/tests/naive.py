"""Reference evaluator written straight from the satisfaction clauses.

Shares nothing with ``folmt.semantics`` except the AST classes: assignments
are plain Python functions and quantifiers loop over the whole domain.
"""

from folmt.syntax import App, Atom, Bin, Bot, Quant, Var


def cons(a, rho):
    return lambda i: a if i == 0 else rho(i - 1)


def term(model, rho, t):
    if isinstance(t, Var):
        return rho(t.index)
    assert isinstance(t, App)
    return model.funcs[t.func][tuple(term(model, rho, a) for a in t.args)]


def holds(model, rho, phi):
    if isinstance(phi, Bot):
        return False
    if isinstance(phi, Atom):
        return tuple(term(model, rho, a) for a in phi.args) in model.rels[phi.rel]
    if isinstance(phi, Bin):
        a = holds(model, rho, phi.left)
        b = holds(model, rho, phi.right)
        return {"impl": (not a) or b, "and": a and b, "or": a or b}[phi.op]
    assert isinstance(phi, Quant)
    vals = [holds(model, cons(x, rho), phi.body) for x in range(model.size)]
    return all(vals) if phi.kind == "all" else any(vals)
