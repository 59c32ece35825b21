"""JSON Schemas for the ``--json`` output of each command."""

_NUM = {"type": "number"}
_NUM_OR_NULL = {"type": ["number", "null"]}
_PARAMS = {"type": "object", "additionalProperties": {"type": "number"}}
_VERDICT = {"type": "string", "pattern": r"^(Stable|Unstable(\([1-9][0-9]*\))?|Indeterminate)$"}

REPORT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "StabilityReport",
    "type": "object",
    "properties": {
        "expression": {"type": "string"},
        "params": _PARAMS,
        "alpha_n": _NUM,
        "m_raw": _NUM_OR_NULL,
        "m_rounded": {"type": ["integer", "null"], "minimum": 0},
        "residual": {"type": ["number", "null"], "minimum": 0},
        "verdict": _VERDICT,
        "integral_value": _NUM_OR_NULL,
        "integral_error_estimate": _NUM_OR_NULL,
        "omega_used": _NUM_OR_NULL,
        "doublings": {"type": "integer", "minimum": 0},
        "warnings": {"type": "array", "items": {"type": "string"}},
    },
    "required": [
        "expression", "params", "alpha_n", "m_raw", "m_rounded", "residual", "verdict",
        "integral_value", "integral_error_estimate", "omega_used", "doublings", "warnings",
    ],
    "additionalProperties": False,
}

INTEGRAND = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "IntegrandDump",
    "type": "object",
    "properties": {
        "expression": {"type": "string"},
        "params": _PARAMS,
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {"omega": _NUM, "value": _NUM_OR_NULL},
                "required": ["omega", "value"],
                "additionalProperties": False,
            },
        },
    },
    "required": ["expression", "params", "rows"],
    "additionalProperties": False,
}

IMPULSE = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "ImpulseTrace",
    "type": "object",
    "properties": {
        "expression": {"type": "string"},
        "params": _PARAMS,
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {"t": {"type": "number", "exclusiveMinimum": 0}, "h": _NUM_OR_NULL},
                "required": ["t", "h"],
                "additionalProperties": False,
            },
        },
        "decay": {"enum": ["Decaying", "Growing", "Inconclusive"]},
    },
    "required": ["expression", "params", "rows", "decay"],
    "additionalProperties": False,
}

SWEEP = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "Sweep",
    "type": "object",
    "properties": {
        "expression": {"type": "string"},
        "param": {"type": "string"},
        "params": _PARAMS,
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "value": _NUM,
                    "m_raw": _NUM_OR_NULL,
                    "m_rounded": {"type": ["integer", "null"], "minimum": 0},
                    "verdict": _VERDICT,
                },
                "required": ["value", "m_raw", "m_rounded", "verdict"],
                "additionalProperties": False,
            },
        },
    },
    "required": ["expression", "param", "params", "rows"],
    "additionalProperties": False,
}

BISECT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "Bisection",
    "type": "object",
    "properties": {
        "param": {"type": "string"},
        "critical": _NUM,
        "lo_verdict": _VERDICT,
        "hi_verdict": _VERDICT,
        "iterations": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "value": _NUM,
                    "verdict": _VERDICT,
                    "m_raw": _NUM_OR_NULL,
                    "action": {"type": "string"},
                },
                "required": ["value", "verdict", "m_raw", "action"],
                "additionalProperties": False,
            },
        },
    },
    "required": ["param", "critical", "lo_verdict", "hi_verdict", "iterations"],
    "additionalProperties": False,
}

SCHEMAS = {
    "check": REPORT,
    "integrand": INTEGRAND,
    "impulse": IMPULSE,
    "sweep": SWEEP,
    "bisect": BISECT,
}
