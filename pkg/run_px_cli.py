from __future__ import annotations

from rotary_px_maps.cli import main

if __name__ == "__main__":
    raise SystemExit(main())
