"""Independent 50-digit evaluation of the closed-form bounds.

Run with `python3 tests/oracle/bound_values.py`; the printed values are frozen
in tests/test_bounds.cpp.
"""
from mpmath import mp, mpf, sqrt, log, log1p

mp.dps = 50


def beta_ridge(sigma, d, lam, X, t, S, delta):
    return sigma * sqrt(d * log((1 + t * X**2 / (lam * d)) / delta)) + sqrt(lam) * S


def beta_forward(sigma, d, lam, X, t, S, delta):
    return sigma * sqrt(d * log((1 + t * X**2 / (lam * d)) / delta)) + (sqrt(lam) + X) * S


def front(X, lam):
    return X**2 / (lam * log(1 + X**2 / lam))


def regret_forward(sigma, d, lam, X, T, delta):
    g = 1 + T * X**2 / (lam * d)
    return 2 * d * sigma**2 * log(g) * log(g ** (mpf(d) / 2) / (delta / 2))


def regret_ridge(sigma, d, lam, X, T, delta):
    return front(X, lam) * regret_forward(sigma, d, lam, X, T, delta)


def tail(A, sigma, sp, delta):
    return sigma * sqrt(2 * (1 / sp**2 + A) * log(sqrt(1 + sp**2 * A) / delta))


def oful(variant, sigma, d, lam, X, T, S, delta):
    expl = sigma * sqrt(2 * log(1 / delta) + d * log(1 + T * X**2 / (lam * d)))
    vol = log(lam + T * X**2 / d)
    if variant == "ridge":
        return 4 * sqrt(front(X, lam) * T * d * vol) * (sqrt(lam) * S + expl)
    return 4 * sqrt(T * d * vol) * ((sqrt(lam) + X) * S + expl)


def dlinucb(variant, sigma, d, lam, X, T, S, delta, gamma, D, B):
    n = (1 - gamma ** (2 * T)) / (1 - gamma**2)
    noise = sigma * sqrt(2 * log(1 / delta) + d * log(1 + X**2 * n / (lam * d)))
    offset = sqrt(lam) * S if variant == "ridge" else (sqrt(lam) + X) * S
    beta = offset + noise
    drift = 2 * X * D * B
    bias = (4 * X**3 * S / lam) * gamma**D / (1 - gamma) * T
    forget = T * log(1 / gamma)
    if variant == "ridge":
        width = 2 * sqrt(2) * beta * sqrt(d * T) * sqrt(forget + log(1 + X**2 / (d * lam * (1 - gamma))))
    else:
        width = 2 * beta * sqrt(d * T) * sqrt(forget + log(1 + (2 - gamma) * X**2 / (d * lam * (1 - gamma))))
    return drift + bias + width


def show(name, v):
    print(f"{name} = {mp.nstr(v, 17)}")


s01 = mpf("0.1")
d5 = 5
show("beta_ridge(sigma=0.1,d=5,lam=1,X=1,t=100,S=1,delta=0.05)", beta_ridge(s01, d5, 1, 1, 100, 1, mpf("0.05")))
sig3 = sqrt(mpf("0.1"))
show("beta_forward(fig3,t=1000)", beta_forward(sig3, 100, mpf("1e-5"), 200, 1000, 1, mpf("1e-3")))
show("regret_ridge(fig2,T=1000)", regret_ridge(s01, d5, 1, 1, 1000, mpf("0.05")))
show("regret_forward(fig2,T=1000)", regret_forward(s01, d5, 1, 1, 1000, mpf("0.05")))
show("tail(A=10,sigma=0.1,sp=1,delta=0.05)", tail(10, s01, 1, mpf("0.05")))
show("oful_ridge(fig3,T=1000)", oful("ridge", sig3, 100, mpf("1e-5"), 200, 1000, 1, mpf("1e-3")))
show("oful_forward(fig3,T=1000)", oful("forward", sig3, 100, mpf("1e-5"), 200, 1000, 1, mpf("1e-3")))
# drift setting: d=2, sigma=0.1, lambda=1, X=1, S=1, delta=0.01, T=4000
g = mpf("0.99")
show("dlinucb_ridge(drift,gamma=0.99,D=100,B=1.57)", dlinucb("ridge", s01, 2, 1, 1, 4000, 1, mpf("0.01"), g, 100, mpf("1.57")))
show("dlinucb_forward(drift,gamma=0.99,D=100,B=1.57)", dlinucb("forward", s01, 2, 1, 1, 4000, 1, mpf("0.01"), g, 100, mpf("1.57")))
# adversarial bounds at Y=2, d=5, lambda=1, X=1, T=200
lg = log(1 + mpf(200) / 5)
show("adversarial_ridge(Y=2,d=5,T=200)", 4 * 4 * 5 * lg)
show("adversarial_forward(Y=2,d=5,T=200)", 4 * 5 * lg)
# elliptical potential: d=1, lambda=1, x=1
T = 1000
show("sum_{t=1}^{1000} 1/(1+t)", sum(mpf(1) / (1 + t) for t in range(1, T + 1)))
show("log(1+1000)", log(1 + mpf(T)))
