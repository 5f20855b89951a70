import sys

from mbqaoa.cli import main

sys.exit(main())
