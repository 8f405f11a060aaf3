# Copyright (c) DILI simulator contributors.
# All rights reserved.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.
#

# pyre-strict

from dili.utils.scripts.cli import main

if __name__ == "__main__":
    raise SystemExit(main())
