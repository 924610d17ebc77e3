"""Optional SVG rendering of metric plot payloads (requires matplotlib).

Payloads are plain dicts with a ``kind`` field; anything unrecognized is
skipped silently so plugin metrics can ship their own payload shapes
without breaking the CLI.
"""

from __future__ import annotations

from .errors import ValidationError


def _matplotlib():
    try:
        import matplotlib
    except ImportError as exc:  # pragma: no cover - depends on environment
        raise ValidationError(
            "SVG plots need matplotlib; install the 'plots' extra"
        ) from exc
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_svg(payload: dict, path: str, title: str = "") -> bool:
    """Render one payload to an SVG file; returns False for unknown kinds."""
    plt = _matplotlib()
    kind = payload.get("kind")
    fig = None
    try:
        if kind == "projection_scatter":
            fig, ax = plt.subplots(figsize=(5, 4))
            for label, pts, marker in (
                ("real", payload["real"], "o"),
                ("synthetic", payload["synthetic"], "x"),
            ):
                xs = [p[0] for p in pts]
                ys = [p[1] for p in pts]
                ax.scatter(xs, ys, s=8, alpha=0.5, marker=marker, label=label)
            ax.set_xlabel("component 1")
            ax.set_ylabel("component 2")
            ax.legend()
        elif kind == "heatmap":
            fig, ax = plt.subplots(figsize=(5, 4))
            im = ax.imshow(payload["matrix"], cmap="coolwarm", vmin=-1, vmax=1)
            ticks = range(len(payload["columns"]))
            ax.set_xticks(ticks, payload["columns"], rotation=90, fontsize=6)
            ax.set_yticks(ticks, payload["columns"], fontsize=6)
            fig.colorbar(im)
        elif kind == "column_tests":
            fig, ax = plt.subplots(figsize=(6, 3))
            ax.bar(payload["columns"], payload["statistic"])
            ax.set_ylabel("statistic")
            ax.tick_params(axis="x", rotation=90, labelsize=6)
        elif kind == "interval_diff":
            fig, ax = plt.subplots(figsize=(6, 3))
            xs = range(len(payload["columns"]))
            ax.errorbar(
                xs,
                payload["diff"],
                yerr=[
                    [d - lo for d, lo in zip(payload["diff"], payload["lo"])],
                    [hi - d for d, hi in zip(payload["diff"], payload["hi"])],
                ],
                fmt="o",
            )
            ax.axhline(0.0, color="grey", lw=0.8)
            ax.set_xticks(list(xs), payload["columns"], rotation=90, fontsize=6)
            ax.set_ylabel("mean difference")
        elif kind == "mean_scatter":
            fig, ax = plt.subplots(figsize=(4, 4))
            ax.scatter(payload["real_mean"], payload["synthetic_mean"], s=12)
            lim = [0, 1]
            ax.plot(lim, lim, color="grey", lw=0.8)
            ax.set_xlabel("real mean")
            ax.set_ylabel("synthetic mean")
        elif kind == "roc_curves":
            fig, ax = plt.subplots(figsize=(4, 4))
            for curve in payload["curves"]:
                ax.plot(curve["fpr"], curve["tpr"], label=curve["label"])
            ax.plot([0, 1], [0, 1], color="grey", lw=0.8, linestyle="--")
            ax.set_xlabel("false positive rate")
            ax.set_ylabel("true positive rate")
            ax.legend()
        elif kind == "model_bars":
            fig, ax = plt.subplots(figsize=(5, 3))
            xs = range(len(payload["models"]))
            ax.bar(xs, payload["train_diff"], width=0.4, label="train")
            if "test_diff" in payload:
                ax.bar(
                    [x + 0.4 for x in xs], payload["test_diff"], width=0.4, label="test"
                )
            ax.set_xticks([x + 0.2 for x in xs], payload["models"], fontsize=7)
            ax.set_ylabel("F1 difference")
            ax.legend()
        else:
            return False
        if title:
            fig.suptitle(title, fontsize=9)
        fig.tight_layout()
        fig.savefig(path, format="svg")
        return True
    finally:
        if fig is not None:
            plt.close(fig)
