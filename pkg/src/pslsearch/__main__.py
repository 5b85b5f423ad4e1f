from pslsearch.cli import main

raise SystemExit(main())
