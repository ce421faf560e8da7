"""Structured-formula vs oracle benchmark over generated instances.

Each trial generates a fresh two-sided structured instance, then times the
closed-form product pseudo-inverse (which consumes N's known SVD) against
the direct SVD oracle applied to the assembled product.  Timings cover the
full public call, hypothesis checks and residual verification included,
so the comparison reflects what callers actually pay.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass

from .decomp import PenroseResiduals
from .formulas import pinv_oracle_result, pinv_xny
from .generators import InstanceSpec, generate
from .matrix import frobenius_norm

__all__ = ["BenchRecord", "CSV_HEADER", "run_bench", "write_csv", "summarize"]

CSV_HEADER = "method,m,n,r,wall_time_s,res_a,res_b,res_c,res_d,oracle_distance"

_TIME_FLOOR = 1e-9  # perf_counter deltas can quantize to 0 on tiny inputs


@dataclass(frozen=True)
class BenchRecord:
    method: str
    m: int
    n: int
    r: int
    wall_time: float
    residuals: PenroseResiduals
    oracle_distance: float


def _trial_seed(seed: int, size: int, trial: int) -> int:
    return (seed + 1_000_003 * size + trial) % 2**64


def run_bench(
    sizes: list[int],
    trials: int,
    seed: int,
    sigma_cond: float = 10.0,
) -> list[BenchRecord]:
    """One oracle record and one formula record per (size, trial)."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    records: list[BenchRecord] = []
    for size in sizes:
        if size < 2:
            raise ValueError(f"bench sizes must be >= 2, got {size}")
        for trial in range(trials):
            spec = InstanceSpec(
                m=size,
                n=size,
                r=size // 2,
                sigma_cond=sigma_cond,
                flavor="a1a2",
                seed=_trial_seed(seed, size, trial),
            )
            inst = generate(spec)
            m_mat = inst.x @ inst.n_matrix @ inst.y

            t0 = time.perf_counter()
            oracle = pinv_oracle_result(m_mat)
            t_oracle = max(time.perf_counter() - t0, _TIME_FLOOR)

            t0 = time.perf_counter()
            formula = pinv_xny(inst.x, inst.n_matrix, inst.y, inst.n_svd_true)
            t_formula = max(time.perf_counter() - t0, _TIME_FLOOR)

            distance = frobenius_norm(formula.z - oracle.z) / max(
                1.0, frobenius_norm(oracle.z)
            )
            records.append(
                BenchRecord(
                    "oracle", size, size, spec.r, t_oracle, oracle.residuals, 0.0
                )
            )
            records.append(
                BenchRecord(
                    "thm33", size, size, spec.r, t_formula, formula.residuals, distance
                )
            )
    return records


def write_csv(records: list[BenchRecord], path) -> None:
    with open(path, "w", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER.split(","))
        for rec in records:
            writer.writerow(
                [
                    rec.method,
                    rec.m,
                    rec.n,
                    rec.r,
                    f"{rec.wall_time:.9f}",
                    f"{rec.residuals.r_a:.6e}",
                    f"{rec.residuals.r_b:.6e}",
                    f"{rec.residuals.r_c:.6e}",
                    f"{rec.residuals.r_d:.6e}",
                    f"{rec.oracle_distance:.6e}",
                ]
            )


def summarize(records: list[BenchRecord]) -> list[str]:
    """Per (size, method) mean wall time plus max oracle distance lines."""
    lines = []
    sizes = sorted({rec.m for rec in records})
    for size in sizes:
        for method in ("oracle", "thm33"):
            group = [r for r in records if r.m == size and r.method == method]
            if not group:
                continue
            mean_t = sum(r.wall_time for r in group) / len(group)
            max_d = max(r.oracle_distance for r in group)
            lines.append(
                f"size={size} method={method} mean_wall_time_s={mean_t:.6f} "
                f"max_oracle_distance={max_d:.3e}"
            )
    return lines
