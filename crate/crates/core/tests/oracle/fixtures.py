"""Extended-precision reference values frozen into the Rust test suite.

Run with `python3 fixtures.py`; requires mpmath. Every value is computed at
60 significant digits, either from the defining integral (mpmath.quad with
breakpoints at the density kinks) or from the erfc definition of Q.
"""
from mpmath import mp, mpf, erfc, sqrt, exp, log, pi, quad, inf, ncdf, findroot, diff

mp.dps = 60


def Q(x):
    return erfc(x / sqrt(2)) / 2


def variance(m, s2):
    s = sqrt(s2)
    return s2 + m * m - m * s * exp(-m * m / (2 * s2)) / (sqrt(2 * pi) * Q(m / s))


def pdf(m, s2, mu, y):
    s = sqrt(s2)
    norm = 2 * sqrt(2 * pi * s2) * exp(m * m / (2 * s2)) * Q(m / s)
    return exp(-(y - mu) ** 2 / (2 * s2) - m * abs(y - mu) / s2) / norm


def delta_by_integral(m, s2, d, eps):
    """delta = int max(0, f_0 - e^eps f_d) dy, crossover found numerically."""
    loss = lambda y: log(pdf(m, s2, 0, y)) - log(pdf(m, s2, d, y))
    lo, hi = mpf(-1e4), mpf(d)
    for _ in range(400):
        mid = (lo + hi) / 2
        if loss(mid) >= eps:
            lo = mid
        else:
            hi = mid
    yc = lo
    # the integrand lives within a few sigma of the crossover; without
    # intermediate points tanh-sinh misses most of it when yc << 0
    s = sqrt(s2)
    near = {yc - k * s for k in (1, 3, 10, 30)} | {p for p in (mpf(0), mpf(d)) if p < yc}
    pts = [-inf] + sorted(near) + [yc]
    return quad(lambda y: pdf(m, s2, 0, y) - exp(eps) * pdf(m, s2, d, y), pts)


def delta_closed_form(m, s2, d, eps):
    s = sqrt(s2)
    a, b = s / d, s / (2 * m + d)
    if s2 * eps / d <= d / 2 + m:
        return 1 - (Q(1 / (2 * b) - b * eps) + exp(eps) * Q(1 / (2 * b) + b * eps)) / (2 * Q(m / s))
    return (Q(a * eps - 1 / (2 * a)) - exp(eps) * Q(a * eps + 1 / (2 * a))) / (2 * Q(m / s))


def renyi_by_integral(m, s2, d, a):
    f = lambda y: pdf(m, s2, 0, y) ** a * pdf(m, s2, d, y) ** (1 - a)
    return log(quad(f, [-inf, -200, -50, 0, d, 50, inf])) / (a - 1)


def bbar(m, s2, d, a):
    s = sqrt(s2)
    b1 = -m + (a - 1) * d
    b2 = -m - a * d
    b3 = a * d - m * (1 - 2 * a)
    b4 = b3 - d
    A = exp(a * (a - 1) * (4 * m * d + 4 * m * m) / (2 * s2))
    # Phi(b3/s) - Phi(b4/s) written as an upper-tail difference; as a
    # difference of cdfs it cancels completely even at 60 digits
    return ncdf(b1 / s) + ncdf(b2 / s) + A * (Q(b4 / s) - Q(b3 / s))


def log_conv_osgt(m, s2, k, d2sq, d, eps, a):
    s = sqrt(s2)
    return (k * log(bbar(m, s2, d, a) / (2 * Q(m / s)))
            + (a - 1) * (a * d2sq / (2 * s2) - eps) - log(a - 1) + a * log(1 - 1 / a))


def log_conv_gauss(sg2, d2sq, eps, a):
    return (a - 1) * (a * d2sq / (2 * sg2) - eps) - log(a - 1) + a * log(1 - 1 / a)


def minimize(f, a0):
    a = findroot(lambda t: diff(f, t), a0)
    return a, exp(f(a))


def show(name, v):
    print(f"{name} = {mp.nstr(v, 25)}")


show("Q(1)", Q(1))
show("lnQ(10)", log(Q(10)))
show("lnQ(40)", log(Q(40)))
show("lnQ(-5)", log(Q(-5)))
show("ln(Q(10)-Q(11))", log(Q(10) - Q(11)))
show("Qinv(1e-10)", findroot(lambda x: Q(x) - mpf("1e-10"), 6.3))
show("Qinv(0.25)", findroot(lambda x: Q(x) - mpf("0.25"), 0.67))
show("V(3,40)", variance(3, 40))
show("V(15,630)", variance(15, 630))
show("V(2,20)", variance(2, 20))
for eps in ["0.2", "0.5", "1", "5"]:
    show(f"delta_int(3,40,1,{eps})", delta_by_integral(3, 40, 1, mpf(eps)))
    show(f"delta_cf(3,40,1,{eps})", delta_closed_form(3, 40, 1, mpf(eps)))
show("delta_int(3,40,1,eps*)", delta_by_integral(3, 40, 1, mpf(7) / 80))
for a in ["1.5", "2", "5", "10", "50"]:
    show(f"renyi_int(3,40,1,{a})", renyi_by_integral(3, 40, 1, mpf(a)))
s = sqrt(mpf(630))
tau100 = 100 * mpf(1) / (2 * 630) + log(bbar(15, 630, 1, 100) / (2 * Q(15 / s))) / 99
show("renyi_cf(15,630,1,100)", tau100)
show("renyi_int(15,630,1,100)", renyi_by_integral(15, 630, 1, mpf(100)))
a, v = minimize(lambda t: log_conv_osgt(15, 630, 8, 8, 1, mpf("0.9"), t), 71.6)
show("conv_osgt alpha*", a)
show("conv_osgt(0.9)", v)
a, v = minimize(lambda t: log_conv_gauss(variance(15, 630), 8, mpf("0.9"), t), 46.4)
show("conv_gauss alpha*", a)
show("conv_gauss(0.9)", v)
