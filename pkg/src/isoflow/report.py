"""Check results and the CSV artifacts every entry point writes."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tolerance: float
    passed: bool
    note: str = ""


def fmt(v: float) -> str:
    return "%.17g" % float(v)


def write_report_csv(path, results: list[CheckResult]) -> None:
    """Header check,value,tolerance,pass; one row per check, input order."""
    with open(path, "w", newline="") as fh:
        fh.write("check,value,tolerance,pass\n")
        for res in results:
            fh.write("%s,%s,%s,%s\n" % (res.name, fmt(res.value),
                                        fmt(res.tolerance),
                                        "true" if res.passed else "false"))


def write_spectrum_csv(path, times, spectra) -> None:
    """Header t,index,lambda; spectra[i] is the ascending spectrum at
    times[i]."""
    with open(path, "w", newline="") as fh:
        fh.write("t,index,lambda\n")
        for t, lam in zip(times, spectra):
            for idx, lv in enumerate(np.asarray(lam)):
                fh.write("%s,%d,%s\n" % (fmt(t), idx, fmt(lv)))


def all_passed(results: list[CheckResult]) -> bool:
    return all(r.passed for r in results)
