#!/usr/bin/env python3
"""Build the eo2py extension module and place it next to this script.

Runs `cargo build --release -p eo2-py` and copies the produced cdylib
here under the import name `eo2py`. Afterwards any script in this
directory (or with this directory on sys.path) can `import eo2py`.
"""

import pathlib
import shutil
import subprocess
import sys
import sysconfig

HERE = pathlib.Path(__file__).resolve().parent
ROOT = HERE.parent


def main() -> int:
    subprocess.run(
        ["cargo", "build", "--release", "-p", "eo2-py"],
        cwd=ROOT,
        check=True,
    )
    release = ROOT / "target" / "release"
    candidates = [
        release / "libeo2py.so",  # linux
        release / "libeo2py.dylib",  # macos
        release / "eo2py.dll",  # windows
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        print("error: built extension not found in", release, file=sys.stderr)
        return 1
    # abi3 module: a bare platform suffix is enough, no version tag needed.
    ext = ".pyd" if built.suffix == ".dll" else ".so"
    target = HERE / f"eo2py{ext}"
    shutil.copy2(built, target)
    print(f"installed {target} (python {sysconfig.get_python_version()})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
