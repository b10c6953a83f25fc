"""JSON Schema document for SheetSpec@2, used for structured-output APIs
and published at the service's /schema endpoint."""

from __future__ import annotations

_COLOR = {"type": "string"}

_STYLE = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "fill": _COLOR,
        "fontColor": _COLOR,
        "fontWeight": {"type": "string", "enum": ["normal", "bold"]},
        "fontSize": {"type": "number", "exclusiveMinimum": 0},
        "numberFormat": {"type": "string"},
        "border": {
            "anyOf": [
                {"type": "string"},
                {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {"style": {"type": "string"}, "color": _COLOR},
                },
            ]
        },
    },
}

_ANCHOR_TYPE = {"type": "string", "enum": ["auto", "percentile", "number"]}

_CONDITIONAL_FORMAT = {
    "oneOf": [
        {
            "type": "object",
            "required": ["type", "ref", "operator", "value", "style"],
            "additionalProperties": False,
            "properties": {
                "type": {"const": "cellIs"},
                "ref": {"type": "string"},
                "operator": {
                    "type": "string",
                    "enum": [
                        "equal",
                        "notEqual",
                        "greaterThan",
                        "lessThan",
                        "greaterThanOrEqual",
                        "lessThanOrEqual",
                    ],
                },
                "value": {"type": ["number", "string"]},
                "style": _STYLE,
            },
        },
        {
            "type": "object",
            "required": ["type", "ref", "min", "max", "style"],
            "additionalProperties": False,
            "properties": {
                "type": {"const": "cellIsBetween"},
                "ref": {"type": "string"},
                "min": {"type": "number"},
                "max": {"type": "number"},
                "style": _STYLE,
            },
        },
        {
            "type": "object",
            "required": ["type", "ref", "formula", "style"],
            "additionalProperties": False,
            "properties": {
                "type": {"const": "expression"},
                "ref": {"type": "string"},
                "formula": {"type": "string"},
                "style": _STYLE,
            },
        },
        {
            "type": "object",
            "required": ["type", "ref", "text", "style"],
            "additionalProperties": False,
            "properties": {
                "type": {"const": "containsText"},
                "ref": {"type": "string"},
                "text": {"type": "string"},
                "style": _STYLE,
            },
        },
        {
            "type": "object",
            "required": ["type", "ref", "minColor", "maxColor"],
            "additionalProperties": False,
            "properties": {
                "type": {"const": "colorScale"},
                "ref": {"type": "string"},
                "minColor": _COLOR,
                "midColor": _COLOR,
                "maxColor": _COLOR,
                "minType": _ANCHOR_TYPE,
                "minValue": {"type": "number"},
                "maxType": _ANCHOR_TYPE,
                "maxValue": {"type": "number"},
            },
        },
        {
            "type": "object",
            "required": ["type", "ref", "color"],
            "additionalProperties": False,
            "properties": {
                "type": {"const": "dataBar"},
                "ref": {"type": "string"},
                "color": _COLOR,
                "minType": _ANCHOR_TYPE,
                "minValue": {"type": "number"},
                "maxType": _ANCHOR_TYPE,
                "maxValue": {"type": "number"},
            },
        },
    ]
}

_CELL = {
    "type": "object",
    "required": ["ref"],
    "additionalProperties": False,
    "properties": {
        "ref": {"type": "string", "pattern": "^\\$?[A-Za-z]{1,3}\\$?[1-9][0-9]*$"},
        "text": {"type": "string"},
        "number": {"type": "number"},
        "formula": {"type": "string", "pattern": "^=.+"},
        "style": _STYLE,
    },
    "oneOf": [
        {"required": ["text"]},
        {"required": ["number"]},
        {"required": ["formula"]},
    ],
}

SHEETSPEC_JSON_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "SheetSpec@2 workbook",
    "type": "object",
    "required": ["version", "sheets"],
    "additionalProperties": False,
    "properties": {
        "version": {"type": "string", "const": "SheetSpec@2"},
        "sheets": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["name", "cells"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string", "minLength": 1},
                    "cells": {"type": "array", "items": _CELL},
                    "namedRanges": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["name", "ref"],
                            "additionalProperties": False,
                            "properties": {
                                "name": {"type": "string", "minLength": 1},
                                "ref": {"type": "string", "minLength": 1},
                            },
                        },
                    },
                    "conditionalFormats": {"type": "array", "items": _CONDITIONAL_FORMAT},
                },
            },
        },
        "outputs": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "sheet", "ref", "metric"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string", "minLength": 1},
                    "sheet": {"type": "string", "minLength": 1},
                    "ref": {"type": "string", "minLength": 1},
                    "metric": {"type": "string", "enum": ["value", "values"]},
                },
            },
        },
        "rules": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "disallowVolatile": {"type": "boolean"},
                "allowedFunctions": {"type": "array", "items": {"type": "string"}},
            },
        },
    },
}
