"""Table-style comparison on the benchmark networks.

Expects edge lists under --data-dir (cora.edges, citeseer.edges,
bio-CE-HT.edges or .txt/.cites variants). Thin wrapper over
``riccicore reproduce``.
"""

import sys

from riccicore.cli import main

if __name__ == "__main__":
    sys.exit(main(["reproduce", *sys.argv[1:]]))
