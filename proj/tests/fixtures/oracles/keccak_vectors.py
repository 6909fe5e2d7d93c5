#!/usr/bin/env python3
# Writes keccak.tsv: <input hex>\t<keccak-256 hex>, computed with pycryptodome.
import random
import sys
from pathlib import Path

from Crypto.Hash import keccak


def digest(data: bytes) -> str:
    return keccak.new(digest_bits=256, data=data).hexdigest()


def main() -> None:
    rng = random.Random(20200101)
    lengths = list(range(0, 140)) + [199, 200, 271, 272, 273, 407, 408, 409, 1000, 4096]
    inputs = [b"", b"abc", b"transfer(address,uint256)"]
    inputs += [bytes(rng.getrandbits(8) for _ in range(n)) for n in lengths]
    out = Path(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).with_name("keccak.tsv"))
    with out.open("w") as f:
        for data in inputs:
            f.write(f"{data.hex()}\t{digest(data)}\n")


if __name__ == "__main__":
    main()
