# -*- coding: utf-8 -*-
"""Launch script for the Push-Pull simulator command line.

Run from a shell:
    python run_pushpull.py validate dsgt_ring
    python run_pushpull.py run quadratic_speedup --seed 3
"""

from __future__ import absolute_import
from __future__ import division
from __future__ import print_function

import sys
import os
import logging

# Add repository root to path if not already there
repo_root = os.path.dirname(os.path.abspath(__file__))
if repo_root not in sys.path:
    sys.path.insert(0, repo_root)

# Enable logging
logging.basicConfig(
    level=logging.INFO,
    format='%(name)s - %(levelname)s: %(message)s'
)

from tools.cli import main  # noqa: E402

if __name__ == '__main__':
    sys.exit(main())
