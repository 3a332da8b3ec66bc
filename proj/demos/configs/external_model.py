# Reads "name value" lines, writes one scalar.
import sys

values = {}
with open(sys.argv[1]) as f:
    for line in f:
        name, value = line.split()
        values[name] = float(value)
with open(sys.argv[2], "w") as f:
    f.write(repr(values["a"] ** 2 + 0.5 * values["a"] * values["b"] + values["b"]) + "\n")
