"""Quick end-to-end check of the Python bindings."""

import kvcheck_py as ll

f = ll.GaloisField(9)
assert (f.characteristic, f.degree, f.order) == (3, 2, 9)
for a in range(1, 9):
    assert f.mul(a, f.inv(a)) == 1

s = ll.Surface(2)
assert len(s.points()) == 7
h = s.cohomology(2, [1] * 7)
assert (h["h0"], h["h1"], h["h2"], h["chi"]) == (0, 1, 0, -1), h
assert s.cohomology_k_plus_b() == h

assert ll.Surface(3).cohomology_k_plus_b()["h1"] == 3
assert len(ll.Surface(3).members()) == 13

census = ll.fiber_census(2, 4, samples=10, seed=1)
assert census["histogram"] == {"1": 10}, census

report = ll.report(2, seed=0)
assert all(c["status"] == "pass" for c in report["checks"])

try:
    ll.Surface(6)
except ll.KvcheckError as e:
    assert "prime power" in str(e)
else:
    raise AssertionError("GF(6) accepted")

print("smoke test ok")
