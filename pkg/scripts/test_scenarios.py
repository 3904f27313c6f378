#!/usr/bin/env python3
"""
Interactive walkthrough of the acceptance scenarios.

Run each step individually to inspect measurements and details before running
the full `ergolab scenarios --all`.

Usage:
    python scripts/test_scenarios.py --step 1    # Tameness decision vs brute force
    python scripts/test_scenarios.py --step 2    # Torus shear and quarter turn
    python scripts/test_scenarios.py --step 3    # Golden rotation average
    python scripts/test_scenarios.py --step 4    # Doubling map from 1/7
    python scripts/test_scenarios.py --step 5    # Square map decomposition
    python scripts/test_scenarios.py --step 6    # Block-sequence oscillation
    python scripts/test_scenarios.py --step 7    # Logarithmic Riesz variation
    python scripts/test_scenarios.py --step 8    # Flatness dichotomy
    python scripts/test_scenarios.py --step 9    # Invariant suites
    python scripts/test_scenarios.py --step all  # Run all steps
"""

import argparse
import logging
import sys
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

logging.basicConfig(level=logging.INFO, format="%(asctime)s - %(name)s - %(levelname)s - %(message)s")


def run_step(step: int, max_workers=None):
    """Run the scenario registered for one criterion and print its measurements."""
    from src.scenarios import SCENARIOS, run_scenarios

    spec = next(s for s in SCENARIOS.values() if s.criterion == step)
    print("\n" + "=" * 60)
    print(f"STEP {step}: {spec.title}")
    print("=" * 60)

    (result,) = run_scenarios(spec.id, max_workers=max_workers)

    for m in result.measurements:
        mark = "ok  " if m.passed else "FAIL"
        tolerance = f" (tol {m.tolerance})" if m.tolerance is not None else ""
        print(f"  [{mark}] {m.name}: {m.measured} {m.relation} {m.expected}{tolerance}  [{m.provenance}]")

    budget = f" (budget {result.budget}s)" if result.budget else ""
    print(f"\nWall time: {result.wall_time:.2f}s{budget}")
    if result.details:
        print(f"Details: {sorted(result.details)}")

    print(f"\n{'SUCCESS' if result.passed else 'FAILED'}: {spec.id}")
    return result.passed


def run_all_steps(max_workers=None):
    """Run all steps in criterion order."""
    print("\n" + "#" * 60)
    print("# RUNNING ALL SCENARIOS")
    print("#" * 60)

    results = {step: run_step(step, max_workers) for step in range(1, 10)}

    print("\n" + "=" * 60)
    print("SCENARIO SUMMARY")
    print("=" * 60)
    for step, passed in results.items():
        print(f"  step {step}: {'PASS' if passed else 'FAIL'}")

    return results


def main():
    parser = argparse.ArgumentParser(description="Walk through the acceptance scenarios")
    parser.add_argument(
        "--step",
        choices=[str(i) for i in range(1, 10)] + ["all"],
        default="all",
        help="Which scenario step to run"
    )
    parser.add_argument("--workers", type=int, default=None, help="Thread pool size")
    args = parser.parse_args()

    if args.step == "all":
        results = run_all_steps(args.workers)
        sys.exit(0 if all(results.values()) else 1)
    sys.exit(0 if run_step(int(args.step), args.workers) else 1)


if __name__ == "__main__":
    main()
