"""Extended-precision reference values frozen into the core test suite.

Run with `python3 frozen_values.py`; every value printed here is pasted
verbatim into the Rust tests that cite it.
"""
from mpmath import mp, mpf, power, log, exp, findroot

mp.dps = 50


def term(x, e, scale):
    return power(mpf(x), -mpf(e)) / mpf(scale)


# ImageNet100 error-rate coefficients.
E, LP, LM, LF = mpf("1.44e-14"), mpf("4.39e-3"), mpf("3.05e-2"), mpf("1.79e-1")
A, B, G = mpf("0.620"), mpf("4.882"), mpf("0.377")
A2, B2, G2, ETA = mpf("0.702"), mpf("5.840"), mpf("0.338"), mpf("2.053")
DELTA = mpf(1)


def baseline(dp, m, df):
    return E + term(dp, A, LP) + term(m, B, LM) + term(df, G, LF)


def distilled(dp, m, df, t):
    return E + term(dp, A2, LP) + term(m, B2, LM) + term(df, G2, LF) + term(t, ETA, DELTA)


print("eval_baseline imagenet100 raw:", mp.nstr(baseline("1.28e6", "2.36e6", "1.3e5"), 20))
print("eval_distilled imagenet100 heads:", mp.nstr(distilled("6.4e4", 4, "1.3e5", 4), 20))
for dp in ["6.4e4", "1.28e5", "1.28e6"]:
    print("gap", dp, mp.nstr(baseline(dp, 4, "1.3e5") - distilled(dp, 4, "1.3e5", 4), 20))

m = t = mpf("37.7e6")
df = mpf("1.3e5")
model_pair = term(m, B, LM) - term(m, B2, LM)
df_pair = term(df, G, LF) - term(df, G2, LF)
teacher = term(t, ETA, DELTA)
print("delta imagenet100:", mp.nstr(model_pair + df_pair - teacher, 20))
print("  model pair", mp.nstr(model_pair, 20), "df pair", mp.nstr(df_pair, 20), "teacher", mp.nstr(teacher, 20))

# Stationary points: F'(d) = 0 solved numerically.
def fprime(a, lp, a2, lp2):
    # Scaled by d^(a+1) so the root is well conditioned.
    return lambda d: a2 * power(d, a - a2) / lp2 - a / lp

print("stationary (0.5,1,0.6,2):", mp.nstr(findroot(fprime(mpf("0.5"), 1, mpf("0.6"), 2), (mpf("1e-4"), mpf(1)), solver="bisect"), 20))
print("stationary imagenet:", mp.nstr(findroot(fprime(A, LP, A2, LP), (mpf(1), mpf(100)), solver="bisect"), 20))

f = lambda d: power(d, mpf("-0.5")) - power(d, mpf("-0.6")) - mpf("0.01")
print("crossover:", mp.nstr(findroot(f, (mpf(3000), mpf(3100)), solver="bisect"), 20))
print("F(4):", mp.nstr(f(mpf(4)), 20), "F(1e6):", mp.nstr(f(mpf("1e6")), 20))


def softmax(z, tau=1):
    z = [mpf(v) / tau for v in z]
    mx = max(z)
    ex = [exp(v - mx) for v in z]
    s = sum(ex)
    return [v / s for v in ex]


p = softmax([1, 2, 3])
print("softmax [1,2,3]:", [mp.nstr(v, 20) for v in p])
print("ce label2:", mp.nstr(-log(p[2]), 20))

tau = mpf(2)
ps = softmax([1, 0, 0], tau)
pt = softmax([0, 0, 1], tau)
kl = sum(a * log(a / b) for a, b in zip(ps, pt))
ce = -log(softmax([1, 0, 0])[0])
print("distill example:", mp.nstr(mpf("0.5") * ce + mpf("0.5") * tau**2 * kl, 20))
