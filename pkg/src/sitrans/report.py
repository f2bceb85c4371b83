"""Balance plots for ledgers (matplotlib, headless)."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .accounts_z import Ledger  # noqa: E402


def balance_series(ledger: Ledger) -> list[int]:
    return [ledger.opening] + [r.closing_balance for r in ledger.rows]


def plot_balances(ledgers: dict[str, Ledger], path, title: str = "") -> Path:
    """Step plot of each ledger's balance after every transition."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6, 3.5))
    for name, ledger in ledgers.items():
        ys = balance_series(ledger)
        ax.step(range(len(ys)), ys, where="post", marker="o", label=name)
    ax.axhline(0, color="grey", linewidth=0.5)
    ax.set_xlabel("step")
    ax.set_ylabel("balance")
    if title:
        ax.set_title(title)
    if len(ledgers) > 1:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
