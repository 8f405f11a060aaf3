# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

from dili.api.metrics import Metrics
from dili.api.trace import format_value


def metrics_report(metrics: Metrics) -> str:
    """One `key=value` line per metric, keys sorted."""
    values = metrics.as_dict()
    return "".join(f"{k}={format_value(values[k])}\n" for k in sorted(values))

