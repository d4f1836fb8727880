"""Print the five-row worked example (source, true target, three transports)."""

import sys

from scc_transport.cli import cmd_example

if __name__ == "__main__":
    sys.exit(cmd_example(None, sys.stdout))
