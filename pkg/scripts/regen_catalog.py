#!/usr/bin/env python3
"""Regenerate the JSON description of the built-in catalog.

The output is fully determined by the registry in gssf_verify.catalog;
running this twice always produces identical bytes.
"""

import json
from pathlib import Path

from gssf_verify.catalog import catalog_payload


def render() -> str:
    return json.dumps(catalog_payload(), indent=2, sort_keys=True) + "\n"


def main() -> None:
    target = (
        Path(__file__).resolve().parent.parent
        / "src" / "gssf_verify" / "data" / "catalog.json"
    )
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(render(), encoding="utf-8")
    print(f"wrote {target}")


if __name__ == "__main__":
    main()
