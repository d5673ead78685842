#!/usr/bin/env python3
"""Smoke test for the qot_py extension module.

Builds nothing itself: run `cargo build -p qot-py` (or --release) first,
then `python3 python/smoke_test.py`. The script locates the compiled
cdylib, imports it under the canonical module name, and exercises the
main operations with loose sanity checks.
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def import_qot_py():
    candidates = [
        REPO / "target" / "release" / "libqot_py.so",
        REPO / "target" / "debug" / "libqot_py.so",
        REPO / "target" / "release" / "libqot_py.dylib",
        REPO / "target" / "debug" / "libqot_py.dylib",
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit("no compiled extension found; run `cargo build -p qot-py` first")
    stage = Path(tempfile.mkdtemp(prefix="qot-py-"))
    shutil.copy2(built, stage / "qot_py.so")
    sys.path.insert(0, str(stage))
    import qot_py

    return qot_py


def close(a, b, tol):
    return abs(a - b) <= tol


def main():
    qot = import_qot_py()
    checks = 0

    def ok(cond, what):
        nonlocal checks
        checks += 1
        if not cond:
            sys.exit(f"FAIL: {what}")
        print(f"ok: {what}")

    variants = qot.variants()
    formats = qot.formats()
    ok(variants == ["WoMDCT-1", "WoMDCT-2", "MCT-1", "MCT-2", "MDCT"], "variant names")
    ok(len(formats) == 6 and formats[0] == "PM-BPSK" and formats[-1] == "PM-64QAM", "format names")
    ok(len(qot.constants_digest()) == 64, "constants digest is hex sha256")

    ok(close(qot.ber_threshold_gsnr_db("PM-QPSK"), 8.53, 0.05), "QPSK threshold near 8.53 dB")
    ok(close(qot.ber_threshold_gsnr_db("16qam"), 15.19, 0.1), "16QAM threshold near 15.19 dB")
    ber = qot.pre_fec_ber("PM-QPSK", qot.ber_threshold_gsnr_db("PM-QPSK"))
    ok(close(ber, qot.FEC_BER_LIMIT, 1e-6), "threshold inverts to the FEC limit")

    ok(close(qot.excess_kurtosis("PM-QPSK"), -1.0, 1e-12), "QPSK excess kurtosis is -1")
    ok(all(qot.excess_kurtosis(f) < 0.0 for f in formats), "all formats are sub-Gaussian")

    path = [80.0] * 10
    g = {v: qot.gsnr(v, path)["gsnr_db"] for v in variants}
    ok(g["MDCT"] > g["MCT-1"] > g["MCT-2"] > g["WoMDCT-1"] > g["WoMDCT-2"],
       "GSNR at LOGON orders MDCT > MCT-1 > MCT-2 > WoMDCT-1 > WoMDCT-2")
    p = qot.logon_power_dbm("mdct", path)
    ok(close(p, qot.gsnr("mdct", path)["launch_power_dbm"], 1e-9), "gsnr() uses the LOGON power")
    ase_only = qot.gsnr("mdct", path, include_nli=False, power_dbm=p)
    ok(ase_only["nli_w"] == 0.0 and ase_only["gsnr_db"] > g["MDCT"],
       "ASE-only GSNR exceeds the NLI-limited value at the same power")

    table = qot.reach_table()
    by = {(r["variant"], r["format"]): r["max_spans"] for r in table}
    ok(all(by[("MDCT", f)] >= by[("WoMDCT-1", f)] for f in formats),
       "MDCT reach dominates WoMDCT-1 for every format")
    ok(all(by[(v, "PM-QPSK")] > by[(v, "PM-64QAM")] for v in variants),
       "reach shrinks with the format level")

    same = [qot.span_nli_w(v, 80.0, n_busy=9, gaussian=True) for v in ("womdct-1", "mct-1", "mdct")]
    ok(same[0] == same[1] == same[2], "Gaussian statistics collapse the asinh family bitwise")
    atan = [qot.span_nli_w(v, 80.0, n_busy=9, gaussian=True) for v in ("womdct-2", "mct-2")]
    ok(atan[0] == atan[1], "Gaussian statistics collapse the atan family bitwise")

    cfm = qot.span_nli_w("womdct-1", 80.0, n_busy=5, gaussian=True)
    oracle = qot.oracle_span_nli_w(80.0, n_busy=5)
    delta_db = abs(10.0 * math.log10(oracle / cfm))
    ok(delta_db < 0.5, f"oracle within 0.5 dB of the closed form ({delta_db:.3f} dB)")

    study = qot.link_study(n_high_mfl=4, n_qpsk=1, n_bpsk=1, variant="womdct-1", seed=7)
    ok(study["excluded"] == 0 and study["n_rows"] == 6, "desk-scale study evaluates all samples")
    ok(all(s["rmse_db"] >= s["mae_db"] - 1e-12 for s in study["stats"]), "rmse >= mae per group")

    sim = qot.run_netsim(topology="itb", variant="mdct", otl_erlang=300.0, n_requests=800, seed=1)
    ok(sim["offered"] == 800 and 0.0 <= sim["bbp"] <= 1.0, "netsim bbp is a probability")
    ok(sum(sim["mfl_usage"]) == sim["accepted"], "format usage sums to accepted requests")
    ok(sim["mean_gsnr_db"] > 15.0, "mean feasibility GSNR is sane on the small topology")

    print(f"smoke test passed ({checks} checks)")


if __name__ == "__main__":
    main()
