"""Walkthrough: what the ordered-reference model does and does not nest.

Each built-in table is a complete choice correspondence from the
comparison literature: decoy effects, personal equilibrium,
two-stage shortlisting, limited attention.  The suite classifies every
table and checks the classification against the recorded verdicts.
"""

from refdep import separation_suite

report = separation_suite()

FLAG = {True: "yes", False: "no", None: "-"}

print(f"{'fixture':16s} {'ordu':>5s} {'anchor':>8s} {'rsm':>5s} "
      f"{'pe':>5s}  notes")
for name, entry in sorted(report.items()):
    note = entry.get("cla", "")
    print(f"{name:16s} {FLAG[entry['ordu']]:>5s} "
          f"{FLAG[entry['union_anchor']]:>8s} {FLAG[entry['rsm']]:>5s} "
          f"{FLAG[entry['pe']]:>5s}  {note}")

print("\nall classifications match the recorded matrix:",
      all(entry["matches"] for entry in report.values()))
