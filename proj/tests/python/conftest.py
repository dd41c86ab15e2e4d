import os
import sys

# The ctest harness points CITYSYNTH_MODULE_DIR at the built extension; an
# installed wheel works without it.
module_dir = os.environ.get("CITYSYNTH_MODULE_DIR")
if module_dir and module_dir not in sys.path:
    sys.path.insert(0, module_dir)
