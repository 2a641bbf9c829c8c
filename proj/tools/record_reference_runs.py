#!/usr/bin/env python3
"""Record CPython executions of the corpus, the reference solutions and the
undefined-name fixture, and refresh the expected results in the exercise bank."""

import argparse
import contextlib
import io
import json
import pathlib
import platform
import re
import traceback

ADDRESS = re.compile(r" at 0x[0-9a-fA-F]+>")


def normalize(text):
    return ADDRESS.sub(">", text)


def run(source, path, function_name=None, args=()):
    record = {"stdout": "", "exception": None, "line": None}
    try:
        code = compile(source, path, "exec")
    except SyntaxError as err:
        record["exception"] = type(err).__name__
        record["line"] = err.lineno
        return record, None
    out = io.StringIO()
    namespace = {"__name__": "__main__"}
    returned = None
    with contextlib.redirect_stdout(out):
        try:
            exec(code, namespace)
            if function_name is not None:
                returned = namespace[function_name](*args)
                record["return_repr"] = normalize(repr(returned))
        except Exception as err:
            record["exception"] = type(err).__name__
            frames = [f for f in traceback.extract_tb(err.__traceback__) if f.filename == path]
            record["line"] = frames[-1].lineno if frames else None
    record["stdout"] = normalize(out.getvalue())
    return record, returned


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--data", default=str(pathlib.Path(__file__).resolve().parent.parent / "data"))
    opts = parser.parse_args()
    data = pathlib.Path(opts.data)

    bank = {}
    for path in sorted((data / "bank").glob("*.json")):
        bank[path.stem] = (path, json.loads(path.read_text(encoding="utf-8")))

    runs = {}
    for path in sorted((data / "solutions").glob("*.py")):
        ex = bank[path.stem][1]
        rel = f"solutions/{path.name}"
        source = path.read_text(encoding="utf-8")
        record, returned = run(source, rel)
        if record["exception"] is not None:
            raise SystemExit(f"{rel}: reference solution raised {record['exception']}")
        runs[rel] = record
        if ex["mode"] == "function":
            _, returned = run(source, rel, ex["function_name"], ex["args"])
            ex["expected_return"] = returned
        else:
            ex["expected_output"] = record["stdout"]

    for path in sorted((data / "corpus").glob("*.py")):
        rel = f"corpus/{path.name}"
        runs[rel], _ = run(path.read_text(encoding="utf-8"), rel)

    average = data / "fixtures" / "average_undefined_name.py"
    runs["fixtures/average_undefined_name.py"], _ = run(average.read_text(encoding="utf-8"), "fixtures/average_undefined_name.py")

    for path, ex in bank.values():
        path.write_text(json.dumps(ex, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")

    report = {
        "format": "pypal-reference-runs",
        "version": 1,
        "python": platform.python_version(),
        "runs": runs,
    }
    (data / "reference" / "python_runs.json").write_text(
        json.dumps(report, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    print(f"recorded {len(runs)} runs")


if __name__ == "__main__":
    main()
