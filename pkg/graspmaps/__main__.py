# graspmaps/__main__.py
import sys

from graspmaps.cli.main import main

sys.exit(main())
