"""Canonical JSON formatting shared by the CLI and the HTTP service so both
surfaces emit byte-identical exports for identical inputs."""

import json


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
