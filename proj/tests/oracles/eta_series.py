"""Power series of eta(lambda) in x = lambda - 1 (eta^2/2 = x - log(1 + x))."""
import sympy as sp

x = sp.symbols('x')
inner = sp.series(2 * (x - sp.log(1 + x)) / x**2, x, 0, 8).removeO()
eta = sp.series(x * sp.sqrt(inner), x, 0, 8).removeO()
print([eta.coeff(x, k) for k in range(1, 8)])
