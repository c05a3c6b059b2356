"""Allow running as: python -m powerspace"""

from powerspace.run import main

raise SystemExit(main())
