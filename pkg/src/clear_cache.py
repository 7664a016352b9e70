#!/usr/bin/env python3
# Script to clear the experiment trial cache

import os
import sys
sys.path.insert(0, os.path.dirname(__file__))

from database import TrialCache


def clear_trial_cache():
    deleted = TrialCache().clear()
    print(f"Deleted {deleted} cached trials")


if __name__ == "__main__":
    clear_trial_cache()
