#!/usr/bin/env python3
"""Smoke test for the offsim Python module.

Builds nothing itself: run `cargo build -p offsim-py` first, then
`python3 python/smoke_test.py`. The script copies the built cdylib next to a
temp directory under the name Python expects and imports it from there.
"""

import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def find_library() -> Path:
    candidates = [
        REPO / "target" / profile / name
        for profile in ("debug", "release")
        for name in ("liboffsim.so", "liboffsim.dylib", "offsim.dll")
    ]
    built = [p for p in candidates if p.exists()]
    if not built:
        sys.exit("no built module found; run: cargo build -p offsim-py")
    return max(built, key=lambda p: p.stat().st_mtime)


def check(label: str, ok: bool) -> None:
    print(f"  {'ok' if ok else 'FAIL'}  {label}")
    if not ok:
        sys.exit(1)


def main() -> None:
    lib = find_library()
    tmp = Path(tempfile.mkdtemp(prefix="offsim-smoke-"))
    suffix = ".pyd" if lib.suffix == ".dll" else ".so"
    shutil.copy2(lib, tmp / f"offsim{suffix}")
    sys.path.insert(0, str(tmp))
    import offsim

    print(f"imported offsim from {lib}")

    sc = offsim.Scenario.load(str(REPO / "scenarios" / "face.scenario.json"))
    check("scenario name", sc.name == "face-recognition")

    bundle = sc.simulate(mode="both")
    seq = bundle["runs"][0]["sim"]["makespan_s"]
    dist = bundle["runs"][1]["sim"]["makespan_s"]
    imp = bundle["improvement_percent"]
    check("sequential makespan 1.2 s", abs(seq - 1.2) < 1e-6)
    check("distributed makespan 0.87 s", abs(dist - 0.87) < 1e-6)
    check("improvement 27.5%", abs(imp - 27.5) < 1e-6)

    crashed = sc.simulate(mode="distributed", crash="vm1@0.5")
    check("crash resends vm1's bytes", crashed["runs"][0]["sim"]["resend_bytes"] == 70_000_000)

    sweep = sc.resend_sweep([[70, 0], [35, 35]])
    check(
        "resend sweep maxima",
        [row["max_resend_percent"] for row in sweep["rows"]] == [70.0, 35.0],
    )

    compare = sc.energy_compare(vm_counts=[1, 2])
    kwh = [row["kwh"] for row in compare["rows"]]
    check("1 vs 2 VMs burn equal energy", abs(kwh[0] - kwh[1]) <= 1e-9 * max(kwh))

    saved = offsim.energy_saved(
        compute_mi=1000, mobile_mips=100, server_mips=1000,
        transfer_mbit=1, bandwidth_mbps=1,
    )
    check("energy saved 7.4 J", abs(saved - 7.4) < 1e-9)
    via_speedup = offsim.energy_saved_speedup(
        compute_mi=1000, mobile_mips=100, speedup=10,
        transfer_mbit=1, bandwidth_mbps=1,
    )
    check("speedup form agrees", abs(saved - via_speedup) < 1e-9)

    seq3 = [(5, 1, 1, 1), (4, 1, 1, 1), (3, 1, 1, 1)]
    utilities, k_star = offsim.fu_utilities(seq3)
    check("utilities [7, 3, 0]", utilities == [7.0, 3.0, 0.0] and k_star == 3)
    check("best interval (1, 3, 7.0)", offsim.best_offload_interval(seq3) == (1, 3, 7.0))

    stay = offsim.break_even_decision(1.0, 10.0, 20.0)
    check("short task stays local", stay["decision"] == "continue-local")
    move = offsim.break_even_decision(11.0, 10.0, 20.0)
    check("overrun task offloads", move["decision"] == "offload-and-restart")

    graph = offsim.CallGraph.from_text(
        "node a 0 0.1 0.1 1000 0\n"
        "node b 1 1.0 0.2 2000 100\n"
        "node c 1 1.0 0.2 3000 100\n"
        "edge a b\nedge a c\n"
    )
    check("text graph validates", graph.validate() == [])
    check("fork methods independent", graph.independent("b", "c"))
    stages = graph.extract_chains()["stages"]
    check("fork yields a parallel stage", stages[-1]["kind"] == "parallel")

    shutil.rmtree(tmp, ignore_errors=True)
    print("OK: all smoke checks passed")


if __name__ == "__main__":
    main()
