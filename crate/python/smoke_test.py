"""Smoke test for the smallgen_py extension.

Build and run from the repository root:

    cargo build -p smallgen-py --release --features extension-module
    cp target/release/libsmallgen_py.so python/smallgen_py.so
    python3 python/smoke_test.py
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import smallgen_py as sg


def main():
    f9 = sg.Field(3, 2)
    assert f9.order == 9
    for a in range(1, 9):
        assert f9.mul(a, f9.inv(a)) == 1

    c = sg.Curve(3, 2, "x^5+1")
    assert c.genus == 2 and c.geometric_degree == 2
    assert json.loads(c.analyze())["identity_holds"]

    for l in (1, 2, 3):
        assert c.place_count(l) == c.place_count(l, exhaustive=True)
    assert c.place_count(1) == (4, 4)

    x, y = c.x(), c.y()
    z = x * x + y
    assert z / z == c.element("1")
    assert sum(o * p.degree for p, o in z.divisor()) == 0
    assert c.height([c.element("1"), y]) == (5, 2)

    cert = c.small_generator(workers=2)
    assert cert.height == (3, 2) and cert.lower_bound == (3, 2)
    assert cert.rung == "primary"
    ok, report = cert.verify()
    assert ok, report
    ok, _ = sg.verify_json(cert.to_json())
    assert ok

    doc = json.loads(cert.to_json())
    doc["height"] = "1/1"
    ok, report = sg.verify_json(json.dumps(doc))
    assert not ok and "FAIL height" in report

    inf = c.infinite_places()
    assert len(c.rr_basis([(inf[0], 4)])) == 3

    try:
        sg.Curve(3, 3, "x^5+1")
    except ValueError:
        pass
    else:
        raise AssertionError("wild curve accepted")

    try:
        sg.Curve(3, 2, "x^3+2*x+2").small_generator(delta=0)
    except sg.SearchExhausted:
        pass
    else:
        raise AssertionError("search should be exhausted")

    print("smoke test ok")


if __name__ == "__main__":
    main()
