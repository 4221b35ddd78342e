"""Check a hand-written six-term witness and look at its Ext^3 class.

The fixture witness for [2..4] splices 0 -> [5..6] -> [4..6] -> [4] with
[4] -> [2..4] -> [2..3] and [2..3] -> [1..3] -> [1] -> 0.  The spliced class
lives in Ext^3([1], [5..6]), which is one-dimensional, and the class is its
generator: the witness is valid but does not vanish.
Run:  python demos/witness_file.py
"""
from pathlib import Path

from tiltcheck.homalg import witness_class
from tiltcheck.hrscheck import parse_witness, verify_witness
from tiltcheck.quiverparse import load_algebra
from tiltcheck.repcat import enumerate_indecomposables
from tiltcheck.torsionpairs import parse_torsion_pair

FIX = Path(__file__).resolve().parents[1] / "src" / "tiltcheck" / "fixtures"

alg = load_algebra(FIX / "nakayama6.quiver")
inds = enumerate_indecomposables(alg)
tp = parse_torsion_pair((FIX / "nakayama6.pair").read_text(), inds)
w = parse_witness((FIX / "nakayama6_witness_2-4.txt").read_text(), inds)

for name, m in w.terms.items():
    print(f"{name:3s} dims {list(m.dims)}")
chk = verify_witness(tp, w)
print("status:", chk.status)
c = witness_class(w)
print(f"class in Ext^{c.degree} of dimension {c.group.dim}: coordinates {[str(x) for x in c.coordinates()]}")
