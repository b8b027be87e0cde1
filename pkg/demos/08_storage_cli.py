"""
The storage simulator from the command line
===========================================

Each node is a file in a directory. We ingest a file, kill a node,
repair it with metered reads, and check the file comes back intact.
"""

import subprocess
import sys
import tempfile
from pathlib import Path


def run(*args):
    cmd = [sys.executable, "-m", "lowrepair.cli", *args]
    print("$ lowrepair", " ".join(args))
    res = subprocess.run(cmd, capture_output=True, text=True)
    print(res.stdout + res.stderr, end="")
    print(f"(exit {res.returncode})\n")
    return res.returncode


with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    store = str(tmp / "store")
    src = tmp / "input.bin"
    src.write_bytes(bytes(range(256)) * 40)

    run("ingest", store, str(src), "--params", "10,5,7,1")
    print(sorted(p.name for p in Path(store).iterdir()), "\n")

    run("fail", store, "3")
    run("repair", store)
    run("reassemble", store, str(tmp / "output.bin"))
    print("identical:", (tmp / "output.bin").read_bytes() == src.read_bytes(), "\n")

    run("verify", store)
    run("verify", store, "--max-erasures", "3")

    run("puncture", store)
    run("fail", store, "0")
    run("repair", store)
    run("report", store, "--csv", str(tmp / "metrics.csv"))
