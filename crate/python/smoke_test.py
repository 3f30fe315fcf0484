"""Smoke test for the srg extension module.

Build first:
    cargo build -p srg-py --features extension-module
then run this script; it copies the built library next to itself as srg.so
unless SRG_LIB points at one.
"""

import os
import shutil
import sys
import tempfile

HERE = os.path.dirname(os.path.abspath(__file__))
ROOT = os.path.dirname(HERE)


def load():
    lib = os.environ.get("SRG_LIB")
    if lib is None:
        for profile in ("release", "debug"):
            cand = os.path.join(ROOT, "target", profile, "libsrg.so")
            if os.path.exists(cand):
                lib = cand
                break
    if lib is None:
        sys.exit("libsrg.so not found; build crates/py with --features extension-module")
    tmp = tempfile.mkdtemp()
    shutil.copy(lib, os.path.join(tmp, "srg.so"))
    sys.path.insert(0, tmp)
    import srg

    return srg


def main():
    srg = load()

    z = srg.Cyc.zeta(12)
    assert z ** 12 == srg.Cyc.from_int(1)
    assert z.root_order() == 12
    i = srg.Cyc.zeta(4)
    assert i * i == srg.Cyc.from_int(-1)
    assert (i + i.conj()).is_rational()

    spec = srg.FamilySpec("muT:6")
    assert spec.label == "mu6T"
    assert spec.order() == 72
    assert spec.enumerated_order() == 72
    assert spec.reflection_count() == 16

    checks = srg.FamilySpec("OT:2").verify_lemmas()
    assert all(ok for _, ok, _ in checks), checks

    rows = srg.reflection_table()
    assert len(rows) == 17
    assert ("OT2", 12, 16) in rows

    crude = srg.open_cases("crude")
    refined = srg.open_cases("refined")
    assert len(refined) <= len(crude)

    try:
        srg.FamilySpec("muT:5")
    except ValueError:
        pass
    else:
        raise AssertionError("muT:5 should be rejected")

    ws2 = srg.ws2_checks()
    assert all(ok for _, ok in ws2), ws2

    print("smoke test ok:", len(rows), "reflection groups,", len(refined), "open cases")


if __name__ == "__main__":
    main()
