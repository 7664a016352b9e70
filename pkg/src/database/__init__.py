#!/usr/bin/env python3
# coding: utf-8

# pim-recovery - __init__.py

from database.cache import TrialCache, configure
