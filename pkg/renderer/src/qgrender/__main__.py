"""Allow `python -m qgrender` as an alternative to the console script."""

from .cli import main

raise SystemExit(main())
