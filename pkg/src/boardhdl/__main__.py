from boardhdl.cli import main

raise SystemExit(main())
