"""Allow `python -m qgrating` as an alternative to the console script."""

from .cli import main

raise SystemExit(main())
