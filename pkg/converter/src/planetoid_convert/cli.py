"""planetoid-convert <input_dir> <name> <out_dir>"""

import argparse
import sys

from .convert import DATASETS, ConversionError, convert


def run(argv):
    parser = argparse.ArgumentParser(
        prog="planetoid-convert",
        description="Convert a pickled citation dataset into a bundle directory",
    )
    parser.add_argument("input_dir", help="directory holding the ind.<name>.* files")
    parser.add_argument("name", choices=DATASETS)
    parser.add_argument("out_dir", help="bundle directory to write")
    args = parser.parse_args(argv)
    try:
        convert(args.input_dir, args.name, args.out_dir)
    except (ConversionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
