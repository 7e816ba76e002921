"""Sweep the true environment stiffness and watch the estimator track it.

For a range of stiffness values spanning soft potting mix to packed dry
soil, the run converges and the product (learned compliance x true
stiffness) should be close to one. Softer environments store more error
energy per newton, so they take longer: the softest case gets extra time.

Run:  python demos/demo_stiffness_sweep.py [--plot]
"""

import argparse

import numpy as np

from soilprobe import run_scenario, scenario_preset


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--plot", action="store_true", help="plot results (needs matplotlib)")
    args = ap.parse_args()

    grid = [200.0, 500.0, 1000.0, 2000.0, 5000.0, 20000.0, 100000.0]
    rows = []
    print(f"{'k_true [N/m]':>12s} {'k_est [N/m]':>12s} {'kappa*k':>8s} {'|e_ss| [N]':>10s}")
    for k_true in grid:
        duration = 20.0 if k_true <= 200.0 else 10.0
        cfg = scenario_preset("custom", env_stiffness=k_true, duration=duration)
        s = run_scenario(cfg).summary()
        product = s["kappa_final"] * k_true
        rows.append((k_true, s["stiffness_final"], product, s["steady_state_error"]))
        print(f"{k_true:12.0f} {s['stiffness_final']:12.1f} {product:8.3f} "
              f"{s['steady_state_error']:10.2e}")

    products = np.array([r[2] for r in rows])
    print(f"\nkappa*k across the sweep: min {products.min():.3f}, max {products.max():.3f} "
          f"(ideal 1.000)")

    if args.plot:
        try:
            import matplotlib.pyplot as plt
        except ImportError:
            print("matplotlib not installed; skipping plot")
            return
        k = np.array([r[0] for r in rows])
        est = np.array([r[1] for r in rows])
        fig, ax = plt.subplots(figsize=(7, 5))
        ax.loglog(k, est, "o-", label="estimated")
        ax.loglog(k, k, "k--", lw=0.8, label="ideal")
        ax.set_xlabel("true stiffness [N/m]")
        ax.set_ylabel("estimated stiffness [N/m]")
        ax.grid(alpha=0.3, which="both")
        ax.legend()
        plt.tight_layout()
        plt.show()


if __name__ == "__main__":
    main()
