from spincat.cli import main

raise SystemExit(main())
