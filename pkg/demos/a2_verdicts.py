"""Three small verdicts over A2 (1 -> 2), one per route.

Run:  python demos/a2_verdicts.py
"""
from pathlib import Path

from tiltcheck.hrscheck import verdict_from_silting, verdict_from_torsion
from tiltcheck.quiverparse import load_algebra
from tiltcheck.repcat import enumerate_indecomposables
from tiltcheck.torsionpairs import TorsionPair, ext1_table
from tiltcheck.twotermcx import parse_complexes

FIX = Path(__file__).resolve().parents[1] / "src" / "tiltcheck" / "fixtures"

alg = load_algebra(FIX / "a2.quiver")
inds = enumerate_indecomposables(alg)

# a splitting torsion pair: no extensions from F to T at all
tp = TorsionPair(("[1]", "[1..2]"), ("[2]",), inds)
print("Ext^1(F, T) table:", ext1_table(tp))
v = verdict_from_torsion(tp)
print("splitting pair ->", v.conclusion, "via", v.route)

# (0 -> P1) + (P2 -> P1) is a tilting complex
p = parse_complexes((FIX / "a2_tilting.complexes").read_text(), alg)
v = verdict_from_silting(p, inds)
print("tilting complex ->", v.conclusion, "with", v.evidence["homDimensions"])

# P2 + Sigma P1 is silting but has a negative self-extension
p = parse_complexes((FIX / "a2_negative.complexes").read_text(), alg)
v = verdict_from_silting(p, inds)
print("P2 + Sigma P1 ->", v.conclusion, "via", v.route)
print(v.to_json())
