"""Checks the solitary wave used by the numerics tests.

With k2 = 0, a = c = 1 the first curve flow reduces to k_t = k''' + 3 k k'.
The profile below must make the residual vanish identically.
"""
import sympy as sp

s, t, v, x0 = sp.symbols('s t v x0', positive=True)
k = v * sp.sech(sp.sqrt(v) / 2 * (s - x0 + v * t))**2
res = sp.diff(k, t) - (sp.diff(k, s, 3) + 3 * k * sp.diff(k, s))
print('soliton residual', sp.simplify(res.rewrite(sp.exp)))
