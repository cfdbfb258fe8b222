# Regenerates bessel_golden.txt with mpmath at 40 significant digits.
# Usage: python3 gen_golden.py > bessel_golden.txt
import mpmath as mp

mp.mp.dps = 40

XS_J = [0.25, 0.5, 1.0, 2.0, float(mp.pi), 5.0, 7.5, 10.0, 12.0, 15.9, 16.1, 20.0, 30.0, 40.0, 55.0, 60.0]
XS_Y = [0.5, 1.0, 2.0, float(mp.pi), 5.0, 10.0, 15.9, 16.1, 20.0, 40.0, 60.0]

ORDERS_J = [("J0", mp.mpf(0)), ("J1", mp.mpf(1)), ("J2_3", mp.mpf(2) / 3), ("Jm1_3", -mp.mpf(1) / 3)]

rows = []
for name, nu in ORDERS_J:
    for x in XS_J:
        rows.append((name, x, mp.besselj(nu, mp.mpf(x))))
for n in range(5):
    for x in XS_Y:
        rows.append((f"Y{n}", x, mp.bessely(n, mp.mpf(x))))

for name, x, v in rows:
    print(f"{name} {x!r} {mp.nstr(v, 25)}")
