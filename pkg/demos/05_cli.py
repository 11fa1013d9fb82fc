# # Driving experiments from config files
#
# The chernoff-lab command runs any experiment kind from a flat JSON config and
# writes a CSV plus a plain-text report. This script does the same in-process.

import json
import tempfile
from pathlib import Path

from chernoff_lab.cli import main, template

work = Path(tempfile.mkdtemp(prefix="chernoff_lab_"))

# ## Catalog

main(["list"])

# ## A config from a template

cfg = template("compare").to_dict()
cfg.update(ns=[2 ** k for k in range(4, 11)], output=str(work / "compare"))
path = work / "compare.json"
path.write_text(json.dumps(cfg, indent=2))

main(["compare", "--config", str(path)])
print((work / "compare.csv").read_text())
print((work / "compare.report.txt").read_text())

# ## Bad configs are rejected with exit code 2

cfg["ns"] = [64, 16]
path.write_text(json.dumps(cfg))
print("exit code:", main(["compare", "--config", str(path)]))
