"""Drive every CLI subcommand in-process against one JSON config.

The same document feeds run, classify, verify, sweep, and oracle; list
values inside exponents or coefficient blocks turn it into a sweep grid.
Artifacts land in a scratch directory as deterministic CSV files.
"""

import json
import pathlib
import tempfile

from memheat.cli import main

root = pathlib.Path(tempfile.mkdtemp(prefix="memheat-tour-"))
cfg = root / "config.json"
doc = {
    "domain": {"length": 1.0, "nodes": 101},
    "exponents": {"p": 2.0, "q": 2.0},
    "c": {"family": "power", "amplitude": 1.0, "gamma": 2.0},
    "k": {"family": "power", "amplitude": 1.0, "gamma": 3.0},
    "initial": {"family": "constant", "value": 0.05},
    "solver": {"t_max": 20.0},
    "output": {"dir": str(root / "out"), "snapshot_every": 5.0},
}
cfg.write_text(json.dumps(doc, indent=2))

for args in (["classify", "--config", str(cfg)],
             ["run", "--config", str(cfg)],
             ["verify", "--config", str(cfg)],
             ["oracle", "--config", str(cfg)]):
    print("\n$ memheat " + " ".join(a if " " not in a else repr(a)
                                    for a in args))
    code = main(args)
    print("(exit %d)" % code)

sweep_doc = dict(doc)
sweep_doc["exponents"] = {"p": [1.0, 2.0], "q": 2.0}
sweep_doc["k"] = [
    {"family": "power", "amplitude": 1.0, "gamma": 3.0},
    {"family": "constant", "amplitude": 1.0},
]
sweep_cfg = root / "sweep.json"
sweep_cfg.write_text(json.dumps(sweep_doc))
print("\n$ memheat sweep --config %s  (2 x 2 grid)" % sweep_cfg)
code = main(["sweep", "--config", str(sweep_cfg)])
print("(exit %d)" % code)

print("\nartifacts under %s:" % root)
for f in sorted(root.rglob("*")):
    if f.is_file():
        print("  ", f.relative_to(root))
