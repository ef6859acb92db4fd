import sys

from hoinv.cli import main

sys.exit(main())
