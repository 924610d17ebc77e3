"""Built-in metric modules, one file per metric.

``ALL_METRICS`` lists the descriptors in canonical report order: utility
first, then privacy. Adding a metric means dropping a new module next to
these (see ``_template.py``) and registering its descriptor with the
framework registry.
"""

from .base import (
    Category,
    Direction,
    MetricDescriptor,
    MetricOutput,
    MetricResult,
    derive_seed,
)
from . import (
    dwm,
    pca,
    cio,
    corr_diff,
    mi_diff,
    ks_test,
    h_dist,
    p_mse,
    nnaa,
    auroc_diff,
    cls_acc,
    nndr,
    nnaa_loss,
    dcr,
    hit_rate,
    eps_risk,
    mia_risk,
    att_discl,
)

ALL_METRICS = (
    dwm.METRIC,
    pca.METRIC,
    cio.METRIC,
    corr_diff.METRIC,
    mi_diff.METRIC,
    ks_test.METRIC,
    h_dist.METRIC,
    p_mse.METRIC,
    nnaa.METRIC,
    auroc_diff.METRIC,
    cls_acc.METRIC,
    nndr.METRIC,
    nnaa_loss.METRIC,
    dcr.METRIC,
    hit_rate.METRIC,
    eps_risk.METRIC,
    mia_risk.METRIC,
    att_discl.METRIC,
)

__all__ = [
    "ALL_METRICS",
    "Category",
    "Direction",
    "MetricDescriptor",
    "MetricOutput",
    "MetricResult",
    "derive_seed",
]
