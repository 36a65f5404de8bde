"""Replay the two mutation scripts and inspect what each step relied on.

Run: python3 demos/mutation_replays.py
"""

from cubicsod.sodengine import builtin_script, load_script, replay_script

for case in ("plane", "singular"):
    script = load_script(builtin_script(case))
    result = replay_script(script)
    print(f"== {case}: {result.verdict}")
    for entry in result.trace:
        print(f"  {entry['step']:>2} {entry['op']:<14} {entry['text']}")
    print("  facts used:", result.facts_by_status())

    # every collapsed triangle must add up along the polarisation
    for s in result.shadows:
        print("  shadow", s["triangle"], "additive" if s["ok"] else "NOT additive")

    if result.reference_ok is not None:
        print("  matches the reference decomposition:", result.reference_ok)
        for a, b in result.identifications:
            print(f"    {a}  ~  {b}")
