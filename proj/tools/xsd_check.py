#!/usr/bin/env python3
"""Validate OpenSCENARIO files against the bundled 1.0 schema subset.

Usage: xsd_check.py [--schema PATH] FILE...

Drives the system libxml2 directly through ctypes so no third-party Python
packages are needed. Exits 0 when every file validates, 1 otherwise;
libxml2's own messages land on stderr.
"""

import argparse
import ctypes
import ctypes.util
import os
import sys


def load_libxml2():
    name = ctypes.util.find_library("xml2") or "libxml2.so.2"
    lib = ctypes.CDLL(name)
    lib.xmlReadFile.restype = ctypes.c_void_p
    lib.xmlReadFile.argtypes = [ctypes.c_char_p, ctypes.c_char_p, ctypes.c_int]
    lib.xmlFreeDoc.argtypes = [ctypes.c_void_p]
    lib.xmlSchemaNewParserCtxt.restype = ctypes.c_void_p
    lib.xmlSchemaNewParserCtxt.argtypes = [ctypes.c_char_p]
    lib.xmlSchemaParse.restype = ctypes.c_void_p
    lib.xmlSchemaParse.argtypes = [ctypes.c_void_p]
    lib.xmlSchemaFreeParserCtxt.argtypes = [ctypes.c_void_p]
    lib.xmlSchemaNewValidCtxt.restype = ctypes.c_void_p
    lib.xmlSchemaNewValidCtxt.argtypes = [ctypes.c_void_p]
    lib.xmlSchemaValidateDoc.restype = ctypes.c_int
    lib.xmlSchemaValidateDoc.argtypes = [ctypes.c_void_p, ctypes.c_void_p]
    lib.xmlSchemaFreeValidCtxt.argtypes = [ctypes.c_void_p]
    lib.xmlSchemaFree.argtypes = [ctypes.c_void_p]
    return lib


def main():
    default_schema = os.path.join(
        os.path.dirname(os.path.abspath(__file__)), os.pardir, "data", "openscenario_1_0.xsd"
    )
    parser = argparse.ArgumentParser(description="Validate OpenSCENARIO files.")
    parser.add_argument("--schema", default=default_schema, help="schema path")
    parser.add_argument("files", nargs="+", help="files to validate")
    args = parser.parse_args()

    lib = load_libxml2()
    parser_ctxt = lib.xmlSchemaNewParserCtxt(args.schema.encode())
    if not parser_ctxt:
        sys.exit(f"cannot open schema {args.schema}")
    schema = lib.xmlSchemaParse(parser_ctxt)
    lib.xmlSchemaFreeParserCtxt(parser_ctxt)
    if not schema:
        sys.exit(f"schema {args.schema} does not parse")

    failures = 0
    for path in args.files:
        doc = lib.xmlReadFile(path.encode(), None, 0)
        if not doc:
            print(f"{path}: not well-formed XML", file=sys.stderr)
            failures += 1
            continue
        valid_ctxt = lib.xmlSchemaNewValidCtxt(schema)
        code = lib.xmlSchemaValidateDoc(valid_ctxt, doc)
        lib.xmlSchemaFreeValidCtxt(valid_ctxt)
        lib.xmlFreeDoc(doc)
        if code == 0:
            print(f"{path}: OK")
        else:
            print(f"{path}: INVALID", file=sys.stderr)
            failures += 1

    lib.xmlSchemaFree(schema)
    sys.exit(1 if failures else 0)


if __name__ == "__main__":
    main()
