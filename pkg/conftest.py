"""
Корень репозитория в sys.path, чтобы тесты из tests_mans импортировали модули напрямую
"""

import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))
