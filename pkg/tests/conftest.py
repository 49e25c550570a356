import os
import sys

# make the oracles module importable from the test files
sys.path.insert(0, os.path.dirname(__file__))
