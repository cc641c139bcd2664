#!/usr/bin/env python3
"""Builds the static fixture data files.

Writes fixtures/mini_corpus.jsonl, fixtures/broken_seeds.jsonl,
fixtures/truncation_goldens.json and fixtures/shots/*, then executes every
canonical solution against its unit tests as a sanity pass (python3, node,
tsc and perl must be installed). The replay store is generated separately by
the `fixturegen` binary because it must hash real rendered prompts.
"""

import json
import os
import pathlib
import subprocess
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent
FIX = ROOT / "fixtures"


# ---------------------------------------------------------------- mini corpus
# 10 problems x 4 languages. Ids follow the HumanEval_<n>_<entry> convention.
# fib/fibfib and the two bracketing problems form near-duplicate pairs for
# retrieval tests. Non-Python canonical bodies include their closing brace;
# programs are assembled as scaffold + body + "\n" + tests.

def py(scaffold, body, tests):
    return {"py": (scaffold, body, tests)}


PROBLEMS = []


def problem(pid, langs):
    PROBLEMS.append((pid, langs))


problem("HumanEval_53_add", {
    "py": (
        "def add(x: int, y: int) -> int:\n",
        "    return x + y\n",
        "assert add(2, 3) == 5\nassert add(5, 7) == 12\nassert add(0, 0) == 0\nassert add(-3, 2) == -1\n",
    ),
    "js": (
        "function add(x, y) {\n",
        "  return x + y;\n}",
        "const assert = require('node:assert');\nassert.strictEqual(add(2, 3), 5);\nassert.strictEqual(add(5, 7), 12);\nassert.strictEqual(add(0, 0), 0);\nassert.strictEqual(add(-3, 2), -1);\n",
    ),
    "ts": (
        "function add(x: number, y: number): number {\n",
        "  return x + y;\n}",
        "function check(cond: boolean, name: string): void {\n  if (!cond) {\n    throw new Error('AssertionError: ' + name);\n  }\n}\ncheck(add(2, 3) === 5, 'a1');\ncheck(add(5, 7) === 12, 'a2');\ncheck(add(0, 0) === 0, 'a3');\ncheck(add(-3, 2) === -1, 'a4');\n",
    ),
    "pl": (
        "sub add {\n    my($x, $y) = @_;\n",
        "    return $x + $y;\n}",
        "sub assert_eq {\n    my($got, $want, $name) = @_;\n    if ($got ne $want) {\n        die \"AssertionError: $name got $got want $want\\n\";\n    }\n}\nassert_eq(add(2, 3), 5, 'a1');\nassert_eq(add(5, 7), 12, 'a2');\nassert_eq(add(0, 0), 0, 'a3');\nassert_eq(add(-3, 2), -1, 'a4');\n",
    ),
})

problem("HumanEval_23_strlen", {
    "py": (
        "def strlen(string: str) -> int:\n",
        "    return len(string)\n",
        "assert strlen('') == 0\nassert strlen('abc') == 3\nassert strlen('hello world') == 11\n",
    ),
    "js": (
        "function strlen(string) {\n",
        "  return string.length;\n}",
        "const assert = require('node:assert');\nassert.strictEqual(strlen(''), 0);\nassert.strictEqual(strlen('abc'), 3);\nassert.strictEqual(strlen('hello world'), 11);\n",
    ),
    "ts": (
        "function strlen(string: string): number {\n",
        "  return string.length;\n}",
        "function check(cond: boolean, name: string): void {\n  if (!cond) {\n    throw new Error('AssertionError: ' + name);\n  }\n}\ncheck(strlen('') === 0, 's1');\ncheck(strlen('abc') === 3, 's2');\ncheck(strlen('hello world') === 11, 's3');\n",
    ),
    "pl": (
        "sub strlen {\n    my($string) = @_;\n",
        "    return length($string);\n}",
        "sub assert_eq {\n    my($got, $want, $name) = @_;\n    if ($got ne $want) {\n        die \"AssertionError: $name got $got want $want\\n\";\n    }\n}\nassert_eq(strlen(''), 0, 's1');\nassert_eq(strlen('abc'), 3, 's2');\nassert_eq(strlen('hello world'), 11, 's3');\n",
    ),
})

problem("HumanEval_55_fib", {
    "py": (
        "def fib(n: int) -> int:\n",
        "    a, b = 0, 1\n    for _ in range(n):\n        a, b = b, a + b\n    return a\n",
        "assert fib(10) == 55\nassert fib(1) == 1\nassert fib(8) == 21\n",
    ),
    "js": (
        "function fib(n) {\n",
        "  let a = 0;\n  let b = 1;\n  for (let i = 0; i < n; i++) {\n    const next = a + b;\n    a = b;\n    b = next;\n  }\n  return a;\n}",
        "const assert = require('node:assert');\nassert.strictEqual(fib(10), 55);\nassert.strictEqual(fib(1), 1);\nassert.strictEqual(fib(8), 21);\n",
    ),
    "ts": (
        "function fib(n: number): number {\n",
        "  let a = 0;\n  let b = 1;\n  for (let i = 0; i < n; i++) {\n    const next = a + b;\n    a = b;\n    b = next;\n  }\n  return a;\n}",
        "function check(cond: boolean, name: string): void {\n  if (!cond) {\n    throw new Error('AssertionError: ' + name);\n  }\n}\ncheck(fib(10) === 55, 'f1');\ncheck(fib(1) === 1, 'f2');\ncheck(fib(8) === 21, 'f3');\n",
    ),
    "pl": (
        "sub fib {\n    my($n) = @_;\n",
        "    my($a, $b) = (0, 1);\n    for (1 .. $n) {\n        ($a, $b) = ($b, $a + $b);\n    }\n    return $a;\n}",
        "sub assert_eq {\n    my($got, $want, $name) = @_;\n    if ($got ne $want) {\n        die \"AssertionError: $name got $got want $want\\n\";\n    }\n}\nassert_eq(fib(10), 55, 'f1');\nassert_eq(fib(1), 1, 'f2');\nassert_eq(fib(8), 21, 'f3');\n",
    ),
})

problem("HumanEval_63_fibfib", {
    "py": (
        "def fibfib(n: int) -> int:\n",
        "    a, b, c = 0, 0, 1\n    for _ in range(n):\n        a, b, c = b, c, a + b + c\n    return a\n",
        "assert fibfib(1) == 0\nassert fibfib(5) == 4\nassert fibfib(8) == 24\n",
    ),
    "js": (
        "function fibfib(n) {\n",
        "  let a = 0;\n  let b = 0;\n  let c = 1;\n  for (let i = 0; i < n; i++) {\n    const next = a + b + c;\n    a = b;\n    b = c;\n    c = next;\n  }\n  return a;\n}",
        "const assert = require('node:assert');\nassert.strictEqual(fibfib(1), 0);\nassert.strictEqual(fibfib(5), 4);\nassert.strictEqual(fibfib(8), 24);\n",
    ),
    "ts": (
        "function fibfib(n: number): number {\n",
        "  let a = 0;\n  let b = 0;\n  let c = 1;\n  for (let i = 0; i < n; i++) {\n    const next = a + b + c;\n    a = b;\n    b = c;\n    c = next;\n  }\n  return a;\n}",
        "function check(cond: boolean, name: string): void {\n  if (!cond) {\n    throw new Error('AssertionError: ' + name);\n  }\n}\ncheck(fibfib(1) === 0, 'ff1');\ncheck(fibfib(5) === 4, 'ff2');\ncheck(fibfib(8) === 24, 'ff3');\n",
    ),
    "pl": (
        "sub fibfib {\n    my($n) = @_;\n",
        "    my($a, $b, $c) = (0, 0, 1);\n    for (1 .. $n) {\n        ($a, $b, $c) = ($b, $c, $a + $b + $c);\n    }\n    return $a;\n}",
        "sub assert_eq {\n    my($got, $want, $name) = @_;\n    if ($got ne $want) {\n        die \"AssertionError: $name got $got want $want\\n\";\n    }\n}\nassert_eq(fibfib(1), 0, 'ff1');\nassert_eq(fibfib(5), 4, 'ff2');\nassert_eq(fibfib(8), 24, 'ff3');\n",
    ),
})

problem("HumanEval_10_make_palindrome", {
    # The Python source matches the renaming example exactly (entry function
    # plus `string` / `beginning_of_suffix` locals).
    "py": (
        "def make_palindrome(string: str) -> str:\n",
        "    if not string:\n        return ''\n\n    beginning_of_suffix = 0\n\n    while string[beginning_of_suffix:] != string[beginning_of_suffix:][::-1]:\n        beginning_of_suffix += 1\n\n    return string + string[:beginning_of_suffix][::-1]\n",
        "assert make_palindrome('') == ''\nassert make_palindrome('x') == 'x'\nassert make_palindrome('xyz') == 'xyzyx'\nassert make_palindrome('xyx') == 'xyx'\nassert make_palindrome('jerry') == 'jerryrrej'\n",
    ),
    "js": (
        "function make_palindrome(string) {\n",
        "  if (string.length === 0) {\n    return '';\n  }\n  let beginning_of_suffix = 0;\n  const reversed = (s) => s.split('').reverse().join('');\n  while (string.slice(beginning_of_suffix) !== reversed(string.slice(beginning_of_suffix))) {\n    beginning_of_suffix += 1;\n  }\n  return string + reversed(string.slice(0, beginning_of_suffix));\n}",
        "const assert = require('node:assert');\nassert.strictEqual(make_palindrome(''), '');\nassert.strictEqual(make_palindrome('x'), 'x');\nassert.strictEqual(make_palindrome('xyz'), 'xyzyx');\nassert.strictEqual(make_palindrome('xyx'), 'xyx');\nassert.strictEqual(make_palindrome('jerry'), 'jerryrrej');\n",
    ),
    "ts": (
        "function make_palindrome(string: string): string {\n",
        "  if (string.length === 0) {\n    return '';\n  }\n  let beginning_of_suffix = 0;\n  const reversed = (s: string): string => s.split('').reverse().join('');\n  while (string.slice(beginning_of_suffix) !== reversed(string.slice(beginning_of_suffix))) {\n    beginning_of_suffix += 1;\n  }\n  return string + reversed(string.slice(0, beginning_of_suffix));\n}",
        "function check(cond: boolean, name: string): void {\n  if (!cond) {\n    throw new Error('AssertionError: ' + name);\n  }\n}\ncheck(make_palindrome('') === '', 'p1');\ncheck(make_palindrome('x') === 'x', 'p2');\ncheck(make_palindrome('xyz') === 'xyzyx', 'p3');\ncheck(make_palindrome('xyx') === 'xyx', 'p4');\ncheck(make_palindrome('jerry') === 'jerryrrej', 'p5');\n",
    ),
    "pl": (
        "sub make_palindrome {\n    my($string) = @_;\n",
        "    if ($string eq '') {\n        return '';\n    }\n    my $beginning_of_suffix = 0;\n    while (substr($string, $beginning_of_suffix) ne reverse(substr($string, $beginning_of_suffix))) {\n        $beginning_of_suffix += 1;\n    }\n    return $string . reverse(substr($string, 0, $beginning_of_suffix));\n}",
        "sub assert_eq {\n    my($got, $want, $name) = @_;\n    if ($got ne $want) {\n        die \"AssertionError: $name got $got want $want\\n\";\n    }\n}\nassert_eq(make_palindrome(''), '', 'p1');\nassert_eq(make_palindrome('x'), 'x', 'p2');\nassert_eq(make_palindrome('xyz'), 'xyzyx', 'p3');\nassert_eq(make_palindrome('xyx'), 'xyx', 'p4');\nassert_eq(make_palindrome('jerry'), 'jerryrrej', 'p5');\n",
    ),
})

problem("HumanEval_61_correct_bracketing", {
    "py": (
        "def correct_bracketing(brackets: str) -> bool:\n",
        "    depth = 0\n    for b in brackets:\n        if b == '(':\n            depth += 1\n        else:\n            depth -= 1\n        if depth < 0:\n            return False\n    return depth == 0\n",
        "assert correct_bracketing('()') is True\nassert correct_bracketing('(((') is False\nassert correct_bracketing('(()())') is True\nassert correct_bracketing(')((') is False\n",
    ),
    "js": (
        "function correct_bracketing(brackets) {\n",
        "  let depth = 0;\n  for (const b of brackets) {\n    if (b === '(') {\n      depth += 1;\n    } else {\n      depth -= 1;\n    }\n    if (depth < 0) {\n      return false;\n    }\n  }\n  return depth === 0;\n}",
        "const assert = require('node:assert');\nassert.strictEqual(correct_bracketing('()'), true);\nassert.strictEqual(correct_bracketing('((('), false);\nassert.strictEqual(correct_bracketing('(()())'), true);\nassert.strictEqual(correct_bracketing(')(('), false);\n",
    ),
    "ts": (
        "function correct_bracketing(brackets: string): boolean {\n",
        "  let depth = 0;\n  for (const b of brackets) {\n    if (b === '(') {\n      depth += 1;\n    } else {\n      depth -= 1;\n    }\n    if (depth < 0) {\n      return false;\n    }\n  }\n  return depth === 0;\n}",
        "function check(cond: boolean, name: string): void {\n  if (!cond) {\n    throw new Error('AssertionError: ' + name);\n  }\n}\ncheck(correct_bracketing('()') === true, 'b1');\ncheck(correct_bracketing('(((') === false, 'b2');\ncheck(correct_bracketing('(()())') === true, 'b3');\ncheck(correct_bracketing(')((') === false, 'b4');\n",
    ),
    "pl": (
        "sub correct_bracketing {\n    my($brackets) = @_;\n",
        "    my $depth = 0;\n    for my $b (split //, $brackets) {\n        if ($b eq '(') {\n            $depth += 1;\n        } else {\n            $depth -= 1;\n        }\n        if ($depth < 0) {\n            return 0;\n        }\n    }\n    return $depth == 0 ? 1 : 0;\n}",
        "sub assert_eq {\n    my($got, $want, $name) = @_;\n    if ($got ne $want) {\n        die \"AssertionError: $name got $got want $want\\n\";\n    }\n}\nassert_eq(correct_bracketing('()'), 1, 'b1');\nassert_eq(correct_bracketing('((('), 0, 'b2');\nassert_eq(correct_bracketing('(()())'), 1, 'b3');\nassert_eq(correct_bracketing(')(('), 0, 'b4');\n",
    ),
})

problem("HumanEval_56_correct_bracketing", {
    "py": (
        "def correct_bracketing(brackets: str) -> bool:\n",
        "    depth = 0\n    for b in brackets:\n        if b == '<':\n            depth += 1\n        else:\n            depth -= 1\n        if depth < 0:\n            return False\n    return depth == 0\n",
        "assert correct_bracketing('<>') is True\nassert correct_bracketing('<<><>>') is True\nassert correct_bracketing('><<>') is False\nassert correct_bracketing('<') is False\n",
    ),
    "js": (
        "function correct_bracketing(brackets) {\n",
        "  let depth = 0;\n  for (const b of brackets) {\n    if (b === '<') {\n      depth += 1;\n    } else {\n      depth -= 1;\n    }\n    if (depth < 0) {\n      return false;\n    }\n  }\n  return depth === 0;\n}",
        "const assert = require('node:assert');\nassert.strictEqual(correct_bracketing('<>'), true);\nassert.strictEqual(correct_bracketing('<<><>>'), true);\nassert.strictEqual(correct_bracketing('><<>'), false);\nassert.strictEqual(correct_bracketing('<'), false);\n",
    ),
    "ts": (
        "function correct_bracketing(brackets: string): boolean {\n",
        "  let depth = 0;\n  for (const b of brackets) {\n    if (b === '<') {\n      depth += 1;\n    } else {\n      depth -= 1;\n    }\n    if (depth < 0) {\n      return false;\n    }\n  }\n  return depth === 0;\n}",
        "function check(cond: boolean, name: string): void {\n  if (!cond) {\n    throw new Error('AssertionError: ' + name);\n  }\n}\ncheck(correct_bracketing('<>') === true, 'c1');\ncheck(correct_bracketing('<<><>>') === true, 'c2');\ncheck(correct_bracketing('><<>') === false, 'c3');\ncheck(correct_bracketing('<') === false, 'c4');\n",
    ),
    "pl": (
        "sub correct_bracketing {\n    my($brackets) = @_;\n",
        "    my $depth = 0;\n    for my $b (split //, $brackets) {\n        if ($b eq '<') {\n            $depth += 1;\n        } else {\n            $depth -= 1;\n        }\n        if ($depth < 0) {\n            return 0;\n        }\n    }\n    return $depth == 0 ? 1 : 0;\n}",
        "sub assert_eq {\n    my($got, $want, $name) = @_;\n    if ($got ne $want) {\n        die \"AssertionError: $name got $got want $want\\n\";\n    }\n}\nassert_eq(correct_bracketing('<>'), 1, 'c1');\nassert_eq(correct_bracketing('<<><>>'), 1, 'c2');\nassert_eq(correct_bracketing('><<>'), 0, 'c3');\nassert_eq(correct_bracketing('<'), 0, 'c4');\n",
    ),
})

problem("HumanEval_24_largest_divisor", {
    "py": (
        "def largest_divisor(n: int) -> int:\n",
        "    for i in range(n - 1, 0, -1):\n        if n % i == 0:\n            return i\n    return 1\n",
        "assert largest_divisor(3) == 1\nassert largest_divisor(7) == 1\nassert largest_divisor(10) == 5\nassert largest_divisor(100) == 50\n",
    ),
    "js": (
        "function largest_divisor(n) {\n",
        "  for (let i = n - 1; i > 0; i--) {\n    if (n % i === 0) {\n      return i;\n    }\n  }\n  return 1;\n}",
        "const assert = require('node:assert');\nassert.strictEqual(largest_divisor(3), 1);\nassert.strictEqual(largest_divisor(7), 1);\nassert.strictEqual(largest_divisor(10), 5);\nassert.strictEqual(largest_divisor(100), 50);\n",
    ),
    "ts": (
        "function largest_divisor(n: number): number {\n",
        "  for (let i = n - 1; i > 0; i--) {\n    if (n % i === 0) {\n      return i;\n    }\n  }\n  return 1;\n}",
        "function check(cond: boolean, name: string): void {\n  if (!cond) {\n    throw new Error('AssertionError: ' + name);\n  }\n}\ncheck(largest_divisor(3) === 1, 'd1');\ncheck(largest_divisor(7) === 1, 'd2');\ncheck(largest_divisor(10) === 5, 'd3');\ncheck(largest_divisor(100) === 50, 'd4');\n",
    ),
    "pl": (
        "sub largest_divisor {\n    my($n) = @_;\n",
        "    for (my $i = $n - 1; $i > 0; $i--) {\n        if ($n % $i == 0) {\n            return $i;\n        }\n    }\n    return 1;\n}",
        "sub assert_eq {\n    my($got, $want, $name) = @_;\n    if ($got ne $want) {\n        die \"AssertionError: $name got $got want $want\\n\";\n    }\n}\nassert_eq(largest_divisor(3), 1, 'd1');\nassert_eq(largest_divisor(7), 1, 'd2');\nassert_eq(largest_divisor(10), 5, 'd3');\nassert_eq(largest_divisor(100), 50, 'd4');\n",
    ),
})

problem("HumanEval_27_flip_case", {
    "py": (
        "def flip_case(string: str) -> str:\n",
        "    return string.swapcase()\n",
        "assert flip_case('') == ''\nassert flip_case('Hello!') == 'hELLO!'\nassert flip_case('These violent delights have violent ends') == 'tHESE VIOLENT DELIGHTS HAVE VIOLENT ENDS'\n",
    ),
    "js": (
        "function flip_case(string) {\n",
        "  let out = '';\n  for (const ch of string) {\n    if (ch === ch.toLowerCase()) {\n      out += ch.toUpperCase();\n    } else {\n      out += ch.toLowerCase();\n    }\n  }\n  return out;\n}",
        "const assert = require('node:assert');\nassert.strictEqual(flip_case(''), '');\nassert.strictEqual(flip_case('Hello!'), 'hELLO!');\nassert.strictEqual(flip_case('These violent delights have violent ends'), 'tHESE VIOLENT DELIGHTS HAVE VIOLENT ENDS');\n",
    ),
    "ts": (
        "function flip_case(string: string): string {\n",
        "  let out = '';\n  for (const ch of string) {\n    if (ch === ch.toLowerCase()) {\n      out += ch.toUpperCase();\n    } else {\n      out += ch.toLowerCase();\n    }\n  }\n  return out;\n}",
        "function check(cond: boolean, name: string): void {\n  if (!cond) {\n    throw new Error('AssertionError: ' + name);\n  }\n}\ncheck(flip_case('') === '', 'fc1');\ncheck(flip_case('Hello!') === 'hELLO!', 'fc2');\ncheck(flip_case('These violent delights have violent ends') === 'tHESE VIOLENT DELIGHTS HAVE VIOLENT ENDS', 'fc3');\n",
    ),
    "pl": (
        "sub flip_case {\n    my($string) = @_;\n",
        "    my $out = '';\n    for my $ch (split //, $string) {\n        if ($ch eq lc($ch)) {\n            $out .= uc($ch);\n        } else {\n            $out .= lc($ch);\n        }\n    }\n    return $out;\n}",
        "sub assert_eq {\n    my($got, $want, $name) = @_;\n    if ($got ne $want) {\n        die \"AssertionError: $name got $got want $want\\n\";\n    }\n}\nassert_eq(flip_case(''), '', 'fc1');\nassert_eq(flip_case('Hello!'), 'hELLO!', 'fc2');\nassert_eq(flip_case('These violent delights have violent ends'), 'tHESE VIOLENT DELIGHTS HAVE VIOLENT ENDS', 'fc3');\n",
    ),
})

problem("HumanEval_45_triangle_area", {
    "py": (
        "def triangle_area(a: int, h: int) -> float:\n",
        "    return a * h / 2.0\n",
        "assert triangle_area(5, 3) == 7.5\nassert triangle_area(2, 2) == 2.0\nassert triangle_area(10, 8) == 40.0\n",
    ),
    "js": (
        "function triangle_area(a, h) {\n",
        "  return (a * h) / 2.0;\n}",
        "const assert = require('node:assert');\nassert.strictEqual(triangle_area(5, 3), 7.5);\nassert.strictEqual(triangle_area(2, 2), 2.0);\nassert.strictEqual(triangle_area(10, 8), 40.0);\n",
    ),
    "ts": (
        "function triangle_area(a: number, h: number): number {\n",
        "  return (a * h) / 2.0;\n}",
        "function check(cond: boolean, name: string): void {\n  if (!cond) {\n    throw new Error('AssertionError: ' + name);\n  }\n}\ncheck(triangle_area(5, 3) === 7.5, 't1');\ncheck(triangle_area(2, 2) === 2.0, 't2');\ncheck(triangle_area(10, 8) === 40.0, 't3');\n",
    ),
    "pl": (
        "sub triangle_area {\n    my($a, $h) = @_;\n",
        "    return $a * $h / 2.0;\n}",
        "sub assert_eq {\n    my($got, $want, $name) = @_;\n    if ($got ne $want) {\n        die \"AssertionError: $name got $got want $want\\n\";\n    }\n}\nassert_eq(triangle_area(5, 3), 7.5, 't1');\nassert_eq(triangle_area(2, 2), 2, 't2');\nassert_eq(triangle_area(10, 8), 40, 't3');\n",
    ),
})


# --------------------------------------------------------------- broken seeds
# One seed per labeled status per language. `body` replaces the canonical
# body under the same scaffold/tests structure.

BROKEN = []


def seed(lang, label, scaffold, body, tests):
    BROKEN.append({
        "language": lang,
        "label": label,
        "scaffold": scaffold,
        "body": body,
        "tests": tests,
    })


PY_SCAFFOLD = "def f(x: int) -> int:\n"
PY_TESTS = "assert f(1) == 2\n"
seed("py", "type_error", PY_SCAFFOLD, "    return len(x) + 1\n", PY_TESTS)
seed("py", "undeclared_error", PY_SCAFFOLD, "    return helper(x)\n", PY_TESTS)
seed("py", "assertion_error", PY_SCAFFOLD, "    return x + 2\n", PY_TESTS)
seed("py", "runtime_error", PY_SCAFFOLD, "    return x // 0\n", PY_TESTS)
seed("py", "other_syntax_error", PY_SCAFFOLD, "    return ((x\n", PY_TESTS)
seed("py", "unhelpful", PY_SCAFFOLD, "    # TODO: Your code here\n", PY_TESTS)

JS_SCAFFOLD = "function f(x) {\n"
JS_TESTS = "const assert = require('node:assert');\nassert.strictEqual(f(1), 2);\n"
seed("js", "type_error", JS_SCAFFOLD, "  return x.toUpperCase();", JS_TESTS)
seed("js", "undeclared_error", JS_SCAFFOLD, "  return helper(x);", JS_TESTS)
seed("js", "assertion_error", JS_SCAFFOLD, "  return x + 2;", JS_TESTS)
seed("js", "runtime_error", JS_SCAFFOLD, "  throw new RangeError('out of range');", JS_TESTS)
seed("js", "other_syntax_error", JS_SCAFFOLD, "  return x +;", JS_TESTS)
seed("js", "unhelpful", JS_SCAFFOLD, "  // TODO: Your code here", JS_TESTS)

TS_SCAFFOLD = "function f(x: number): number {\n"
TS_TESTS = "function check(cond: boolean): void {\n  if (!cond) {\n    throw new Error('AssertionError: f');\n  }\n}\ncheck(f(1) === 2);\n"
seed("ts", "type_error", TS_SCAFFOLD, "  const y: number = 'oops';\n  return y;", TS_TESTS)
seed("ts", "undeclared_error", TS_SCAFFOLD, "  return helper(x);", TS_TESTS)
seed("ts", "assertion_error", TS_SCAFFOLD, "  return x + 2;", TS_TESTS)
seed("ts", "runtime_error", TS_SCAFFOLD, "  throw new RangeError('out of range');", TS_TESTS)
seed("ts", "other_syntax_error", TS_SCAFFOLD, "  return x +;", TS_TESTS)
seed("ts", "unhelpful", TS_SCAFFOLD, "  // TODO: Your code here", TS_TESTS)

PL_SCAFFOLD = "sub f {\n    my($x) = @_;\n"
PL_TESTS = "sub assert_eq {\n    my($got, $want) = @_;\n    if ($got ne $want) {\n        die \"AssertionError: f got $got want $want\\n\";\n    }\n}\nassert_eq(f(1), 2);\n"
seed("pl", "type_error", PL_SCAFFOLD, "    return My::Missing->nosuch($x);", PL_TESTS)
seed("pl", "undeclared_error", PL_SCAFFOLD, "    return helper($x);", PL_TESTS)
seed("pl", "assertion_error", PL_SCAFFOLD, "    return $x + 2;", PL_TESTS)
seed("pl", "runtime_error", PL_SCAFFOLD, "    return $x / 0;", PL_TESTS)
seed("pl", "other_syntax_error", PL_SCAFFOLD, "    return $x +;", PL_TESTS)
seed("pl", "unhelpful", PL_SCAFFOLD, "    # TODO: Your code here", PL_TESTS)


# --------------------------------------------------------- truncation goldens
# Hand-derived (input, output) pairs per language profile. `scaffold` is only
# consulted by the additional-stops strategy (entry-name extraction).

def g(lang, inp, out, scaffold=""):
    return {"language": lang, "scaffold": scaffold, "input": inp, "output": out}


GOLDENS = [
    # py: stops \ndef \nclass \n# \nprint
    g("py", "    return x + y\n\nprint(add(1, 2))", "    return x + y\n"),
    g("py", "    return 1\ndef g():\n    pass", "    return 1"),
    g("py", "    return 1  # inline comment stays", "    return 1  # inline comment stays"),
    # js: stops \n} /* // console.log
    g("js", "  return x + y;\n}\nconsole.log(add(1, 2));", "  return x + y;"),
    g("js", "  return x; // done", "  return x; "),
    g("js", "  let s = 1;\n  return s;", "  let s = 1;\n  return s;"),
    # ts: same stops as js
    g("ts", "  return x + 1;\n}\nconsole.log(f(1));", "  return x + 1;"),
    g("ts", "  return x; /* trailing */", "  return x; "),
    g("ts", "  const s = 1;\n  return s;", "  const s = 1;\n  return s;"),
    # cpp: stop \n}
    g("cpp", "    return x;\n}\nint main() { return 0; }", "    return x;"),
    g("cpp", "    if (x) {\n        return 1;\n    }\n    return 0;\n}\njunk", "    if (x) {\n        return 1;\n    }\n    return 0;"),
    g("cpp", "    return x;", "    return x;"),
    # jv: stops "public static void main" "###" "\n}"
    g("jv", "        return n;\n    }\n    public static void main(String[] args) {}", "        return n;\n    }\n    "),
    g("jv", "### Explanation follows", ""),
    g("jv", "        return n;\n    }\n}", "        return n;\n    }"),
    # php: stops \n} \n?> \n// \n#
    g("php", "    return $x;\n}\n?>", "    return $x;"),
    g("php", "    return $x;\n// done", "    return $x;"),
    g("php", "    return $x + 1;", "    return $x + 1;"),
    # rb: stops \nclass \ndef \n# \nputs, then function-end scan
    g("rb", "  s.length\nend\nputs strlen('x')", "  s.length\nend"),
    g("rb", "  1\nend\nx = f(1)\ny = 2", "  1\nend"),
    g("rb", "  fib(n - 1)\nend\ndef helper\n  2\nend\njunk", "  fib(n - 1)\nend"),
    # cs: stops "public static void Main" "static void Main" \n# \n}
    g("cs", "        return x;\n    }\n    public static void Main() {}", "        return x;\n    }\n    "),
    g("cs", "        return x;\n}", "        return x;"),
    g("cs", "        return x + 1;", "        return x + 1;"),
    # go: stops \nfunc struct "\n// " \n}
    g("go", "\treturn x\n}\nfunc main() {}", "\treturn x"),
    g("go", "\treturn x\n// done", "\treturn x"),
    g("go", "\tt := x + 1\n\treturn t", "\tt := x + 1\n\treturn t"),
    # pl: stops \nsub \n# \n}
    g("pl", "    my($x) = @_;\n    return $x;\n}\nsub helper {}", "    my($x) = @_;\n    return $x;"),
    g("pl", "    return 1;\n# comment", "    return 1;"),
    g("pl", "    return $x + 1;", "    return $x + 1;"),
    # r: stop \n}
    g("r", "    x + y\n}\nprint(add(1, 2))", "    x + y"),
    g("r", "    if (x) {\n        1\n    } else {\n        0\n    }\n}\njunk", "    if (x) {\n        1\n    } else {\n        0\n    }"),
    g("r", "    x + y", "    x + y"),
    # rs: stop \n}
    g("rs", "    x + y\n}\nfn main() {}", "    x + y"),
    g("rs", "    let s = x + 1;\n    s\n}\nextra", "    let s = x + 1;\n    s"),
    g("rs", "    x + y", "    x + y"),
    # sc: stop "\n    }\n"
    g("sc", "        x + y\n    }\nobject Main {}", "        x + y"),
    g("sc", "        x\n    }\n", "        x"),
    g("sc", "        x + y", "        x + y"),
    # sw: stop \n}
    g("sw", "    return x + y\n}\nprint(add(1, 2))", "    return x + y"),
    g("sw", "    let s = x + 1\n    return s\n}\nextra", "    let s = x + 1\n    return s"),
    g("sw", "    return x + y", "    return x + y"),
    # sh: stops \n# \nAnswer \necho \n```, then function-end scan (^}$ / sig)
    g("sh", "  local x=$1\n  printf '%s' $(( x + 1 ))\n}\nls -la\n# done", "  local x=$1\n  printf '%s' $(( x + 1 ))\n}"),
    g("sh", "  printf '%s' $1\n}\n\nhelper() {\n  printf 'hi'\n}\nrest", "  printf '%s' $1\n}\n\nhelper() {\n  printf 'hi'\n}"),
    g("sh", "  local x=$1\n  printf '%s' $x", "  local x=$1\n  printf '%s' $x"),
    # lua: stops \n-- \n# \nend
    g("lua", "  return x + y\nend\nprint(f())", "  return x + y"),
    g("lua", "  return x\n-- done", "  return x"),
    g("lua", "  local s = x + 1\n  return s", "  local s = x + 1\n  return s"),
    # rkt: api stops \n(define \n#| \n; \n( plus additional \n#" \n``` and alphabet
    g("rkt", "  (+ n 1))\n(candidate 1 2)", "  (+ n 1))", "(define (candidate n)\n"),
    g("rkt", "  (+ n 1))\n```", "  (+ n 1))", "(define (candidate n)\n"),
    g("rkt", "  (+ n 1))\nanswer text", "  (+ n 1))", "(define (candidate n)\n"),
    g("rkt", "  (if (> n 0)\n      n\n      0))", "  (if (> n 0)\n      n\n      0))", "(define (candidate n)\n"),
    # jl: stops \nend \n#
    g("jl", "    return x + y\nend\nprintln(f(1))", "    return x + y"),
    g("jl", "    x + 1\n# comment", "    x + 1"),
    g("jl", "    s = x + 1\n    return s", "    s = x + 1\n    return s"),
    # d: stops \nvoid \nbool \nint \n}
    g("d", "    return x + y;\n}\nvoid main() {}", "    return x + y;"),
    g("d", "    return 1;\nint helper() { return 2; }", "    return 1;"),
    g("d", "    return x + y;", "    return x + y;"),
]


# ----------------------------------------------------------------- shot files
# Four worked examples with per-variant explanations. The original listings
# drop everything after a literal % sign, so the affected lines are restored
# from the HumanEval canonical solutions.

EOP_SOURCE = """from typing import Tuple

def even_odd_palindrome(n: int) -> Tuple[int, int]:
    def is_palindrome(n):
        return str(n) == str(n)[::-1]

    even_palindrome_count = 0
    odd_palindrome_count = 0

    for i in range(1, n+1):
        if i%2 == 1 and is_palindrome(i):
            odd_palindrome_count += 1
        elif i%2 == 0 and is_palindrome(i):
            even_palindrome_count += 1
    return (even_palindrome_count, odd_palindrome_count)"""

EOP_TARGET = """import java.util.*;
import java.lang.reflect.*;
import org.javatuples.*;
import java.security.*;
import java.math.*;
import java.io.*;
import java.util.stream.*;
class Problem {
    public static Pair<Long, Long> evenOddPalindrome(long n) {
        long evenPalindromeCount = 0;
        long oddPalindromeCount = 0;

        for (long i = 1; i <= n; i++) {
            if (i % 2 == 1 && isPalindrome(i)) {
                oddPalindromeCount++;
            } else if (i % 2 == 0 && isPalindrome(i)) {
                evenPalindromeCount++;
            }
        }
        return Pair.with(evenPalindromeCount, oddPalindromeCount);
    }

    private static boolean isPalindrome(long n) {
        return Long.toString(n).equals(new StringBuilder(Long.toString(n)).reverse().toString());
    }
}"""

EOP_EXP = """This function takes an integer `n` as input and returns a tuple of two integers. The first integer is the number of even palindromes between 1 and `n`, and the second integer is the number of odd palindromes between 1 and `n`. A palindrome is a number that reads the same forwards and backwards.

The function first defines a helper function `is_palindrome` that takes a number and returns `True` if it is a palindrome and `False` otherwise. This is done by converting the number to a string and checking if the string is equal to its reverse.

The function then initializes two counters, `even_palindrome_count` and `odd_palindrome_count`, to 0. It then loops through all numbers between 1 and `n` (inclusive) and checks if each number is a palindrome and even or odd. If the number is a palindrome and odd, it increments `odd_palindrome_count`. If the number is a palindrome and even, it increments `even_palindrome_count`.

Finally, the function returns a tuple of the two counters."""

EOP_EXP_LBL = """The code is an implementation of finding the number of even and odd palindrome numbers between 1 and `n` (inclusive). It takes an integer `n` as input and returns a tuple of two integers: even and odd palindrome number counts. A palindrome is a number that reads the same forwards and backwards.

def is_palindrome(n):
    return str(n) == str(n)[::-1]
The function first defines a helper function `is_palindrome` that takes a number and returns `True` if it is a palindrome and `False` otherwise. This is done by converting the number to a string and checking if the string is equal to its reverse.

even_palindrome_count = 0
odd_palindrome_count = 0
The counter variable `even_palindrome_count` and `odd_palindrome_count` are used to record the result.

for i in range(1, n+1):
The loops goes through all numbers between 1 and `n` (inclusive)

if i%2 == 1 and is_palindrome(i):
    odd_palindrome_count += 1
elif i%2 == 0 and is_palindrome(i):
    even_palindrome_count += 1
Within the for-loop, the program checks if each number is a palindrome and even or odd. If the number is a palindrome and odd, it increments `odd_palindrome_count`. If the number is a palindrome and even, it increments `even_palindrome_count`.

return (even_palindrome_count, odd_palindrome_count)
Finally, the function returns a tuple of the two counters."""

EOP_EXP_LBL_D = """The code is an implementation of finding the number of even and odd palindrome numbers between 1 and `n` (inclusive). It takes an integer `n` as input and returns a tuple of two integers: even and odd palindrome number counts. A palindrome is a number that reads the same forwards and backwards.

def is_palindrome(n):
    return str(n) == str(n)[::-1]
The function defines a helper function. Let's break it down step by step:
str(n)
The function first converts the input from integers to strings, because Python does not allow one to easily reverse an integer by its digits.
str(n)[::-1]
It then uses string manipulation `[::-1]` to reverse the string.
return str(n) == str(n)[::-1]
It then checks if the string version of the integer is equal to its reversed string version, thereby determining whether the input integer is a palindrome or not.
Hence, the helper function `is_palindrome` takes a number and returns `True` if it is a palindrome and `False` otherwise.

even_palindrome_count = 0
odd_palindrome_count = 0
The counter variable `even_palindrome_count` and `odd_palindrome_count` are used to record the result.

for i in range(1, n+1):
The loops goes through all numbers between 1 and `n` (inclusive)

if i%2 == 1 and is_palindrome(i):
    odd_palindrome_count += 1
elif i%2 == 0 and is_palindrome(i):
    even_palindrome_count += 1
Within the for-loop, the program defines a set of if-else statements. Let's break it down step by step:
i%2 == 1
This checks if the number is odd by checking if the mod 2 of the number has remainder of 1
is_palindrome(i)
Here the program uses previously defined helper function to determine if the number is a palindrome or not.
if i%2 == 1 and is_palindrome(i):
    odd_palindrome_count += 1
Putting it together, both of above components check if the number is odd and a palindrome, and if so, increment the counter `odd_palindrome_count`. The same logic is applied to even palindrome numbers.
Hence, the if-else conditions checks if each number is a palindrome and even/odd and increment respective counters.

return (even_palindrome_count, odd_palindrome_count)
Finally, the function returns a tuple of the two counters. Even palindrome count first, odd palindrome count next."""

IS_SORTED_SOURCE = """from typing import List

def is_sorted(lst: List[int]) -> bool:
    count_digit = dict([(i, 0) for i in lst])
    for i in lst:
        count_digit[i]+=1
    if any(count_digit[i] > 2 for i in lst):
        return False
    if all(lst[i-1] <= lst[i] for i in range(1, len(lst))):
        return True
    else:
        return False"""

IS_SORTED_TARGET = """import java.util.*;
import java.lang.reflect.*;
import org.javatuples.*;
import java.security.*;
import java.math.*;
import java.io.*;
import java.util.stream.*;
class Problem {
    public static boolean isSorted(ArrayList<Long> lst) {
        HashMap<Long, Long> count_digit = new HashMap<Long, Long>();
        for (long i : lst) {
            if (count_digit.containsKey(i)) {
                count_digit.put(i, count_digit.get(i) + 1);
            } else {
                count_digit.put(i, 1L);
            }
        }
        for (long i : lst) {
            if (count_digit.get(i) > 2) {
                return false;
            }
        }
        for (int i = 1; i < lst.size(); i++) {
            if (lst.get(i - 1) > lst.get(i)) {
                return false;
            }
        }
        return true;
    }
}"""

IS_SORTED_EXP = "This function takes in a list of integers and returns a boolean indicating whether the list is sorted in non-descending order and has no more than two occurrences of any integer. The function first creates a dictionary where the keys are the integers in the list and the values are the number of times that integer appears in the list. It then checks if any integer appears more than twice in the list, and returns False if so. Finally, it checks if the list is sorted in non-descending order, and returns True if so, and False otherwise."

IS_SORTED_EXP_LBL = """The code is an implementation of checking whether a list is sorted in non-descending order and has no more than two occurrences of any integer. takes in a list of integers and returns a boolean.

count_digit = dict([(i, 0) for i in lst])
for i in lst:
    count_digit[i]+=1
The function first creates a dictionary where the keys are the integers in the list and the values are the number of times that integer appears in the list.

if any(count_digit[i] > 2 for i in lst):
    return False
It then checks if any integer appears more than twice in the list, and returns False if so.

if all(lst[i-1] <= lst[i] for i in range(1, len(lst))):
    return True
else:
    return False
Finally, it checks if the list is sorted in non-descending order, and returns True if so, and False otherwise."""

IS_SORTED_EXP_LBL_D = """The code is an implementation of checking whether a list is sorted in non-descending order and has no more than two occurrences of any integer. It takes in a list of integers and returns a boolean.

count_digit = dict([(i, 0) for i in lst])
for i in lst:
    count_digit[i]+=1
The function first creates a dictionary where the keys are the integers in the list and the values are the number of times that integer appears in the list.

if any(count_digit[i] > 2 for i in lst):
    return False
It then checks if any integer appears more than twice in the list, and returns False if so.

if all(lst[i-1] <= lst[i] for i in range(1, len(lst))):
    return True
else:
    return False
Let's break it down step by step:
lst[i-1] <= lst[i]
Within the list comprehension, this checks whether the current element at index `i` is greater or equal to the previous element at index `i-1`.
if all(lst[i-1] <= lst[i] for i in range(1, len(lst))):
The whole expression then checks if every element is greater or equal to the element before in the list. In another word, this checks if the list is sorted in non-descending order.
    return True
else:
    return False
If the list is sorted in non-descending order the function returns True, otherwise it returns False.
Hence, the if-else statements returns True if the list is sorted in non-descending order, and False otherwise."""

SPG_SOURCE = """from typing import List


def separate_paren_groups(paren_string: str) -> List[str]:
    result = []
    current_string = []
    current_depth = 0

    for c in paren_string:
        if c == '(':
            current_depth += 1
            current_string.append(c)
        elif c == ')':
            current_depth -= 1
            current_string.append(c)

            if current_depth == 0:
                result.append(''.join(current_string))
                current_string.clear()

    return result"""

SPG_TARGET = """import java.util.*;
import java.lang.reflect.*;
import org.javatuples.*;
import java.security.*;
import java.math.*;
import java.io.*;
import java.util.stream.*;
class Problem {
    public static ArrayList<String> separateParenGroups(String paren_string) {
        ArrayList<String> result = new ArrayList<String>();
        ArrayList<Character> current_string = new ArrayList<Character>();
        int current_depth = 0;

        for (int i = 0; i < paren_string.length(); i++) {
            char c = paren_string.charAt(i);
            if (c == '(') {
                current_depth += 1;
                current_string.add(c);
            } else if (c == ')') {
                current_depth -= 1;
                current_string.add(c);

                if (current_depth == 0) {
                    StringBuilder sb = new StringBuilder(current_string.size());
                    for (Character ch : current_string) {
                        sb.append(ch);
                    }
                    result.add(sb.toString());
                    current_string.clear();
                }
            }
        }

        return result;
    }
}"""

SPG_EXP = "This function takes a string of parentheses and returns a list of strings, where each string is a group of parentheses. A group is defined as a set of parentheses that are balanced, meaning that each opening parenthesis has a corresponding closing parenthesis. The function works by iterating over each character in the input string, and keeping track of the current depth of nested parentheses. When an opening parenthesis is encountered, the depth is incremented and the character is added to the current string. When a closing parenthesis is encountered, the depth is decremented and the character is added to the current string. If the depth reaches 0, it means that a complete group has been found, so the current string is added to the result list and cleared for the next group. The function returns the list of groups."

SPG_EXP_LBL = """The code is an implementation of a function `separate_paren_groups` which takes a string of parentheses and returns a list of strings containing the groups of parentheses.

result = []
current_string = []
current_depth = 0
The function initializes an empty list `result` to store the groups of parentheses. It also initializes an empty list `current_string` to store the current group of parentheses being processed. The variable `current_depth` is initialized to 0 to keep track of the depth of the current group of parentheses.

for c in paren_string:
The function iterates through each character `c` in the input string `paren_string`.

if c == '(':
    current_depth += 1
    current_string.append(c)
If the character is an opening parenthesis `'('`, the function increments the `current_depth` variable and appends the character to the `current_string` list.

elif c == ')':
    current_depth -= 1
    current_string.append(c)
If the character is a closing parenthesis `')'`, the function decrements the `current_depth` variable and appends the character to the `current_string` list.

if current_depth == 0:
    result.append(''.join(current_string))
    current_string.clear()
If the `current_depth` variable reaches 0, it means that the current group of parentheses has been fully processed, so the function joins the `current_string` list into a string and appends it to the `result` list. The `current_string` list is then cleared to start processing the next group of parentheses.

return result
The function returns the `result` list containing the groups of parentheses."""

SPG_EXP_LBL_D = """The code is an implementation of a function `separate_paren_groups` which takes a string of parentheses and returns a list of strings containing the groups of parentheses.

result = []
current_string = []
current_depth = 0
The function initializes an empty list `result` to store the groups of parentheses. It also initializes an empty list `current_string` to store the current group of parentheses being processed. The variable `current_depth` is initialized to 0 to keep track of the depth of the current group of parentheses.

for c in paren_string:
The function iterates through each character `c` in the input string `paren_string`.

if c == '(':
    current_depth += 1
    current_string.append(c)
If the character is an opening parenthesis `'('`, the function increments the `current_depth` variable and appends the character to the `current_string` list.

elif c == ')':
    current_depth -= 1
    current_string.append(c)
If the character is a closing parenthesis `')'`, the function decrements the `current_depth` variable and appends the character to the `current_string` list.

if current_depth == 0:
    result.append(''.join(current_string))
    current_string.clear()
Let's break it down step by step:
''.join(current_string)
The program joins the `current_string` (which is represented as a list) into a string
Hence, the if-statement does the following: if the `current_depth` variable reaches 0, it means that the current group of parentheses has been fully processed, so the function joins the `current_string` list into a string and appends it to the `result` list. The `current_string` list is then cleared to start processing the next group of parentheses.

return result
The function returns the `result` list containing the groups of parentheses."""

SORT_ARRAY_SOURCE = """from typing import List

def sort_array(array: List[int]) -> List[int]:
    return [] if len(array) == 0 else sorted(array, reverse= (array[0]+array[-1]) % 2 == 0)"""

SORT_ARRAY_TARGET = """import java.util.*;
import java.lang.reflect.*;
import org.javatuples.*;
import java.security.*;
import java.math.*;
import java.io.*;
import java.util.stream.*;
class Problem {
    public static ArrayList<Long> sortArray(ArrayList<Long> array) {
        if (array.size() == 0) {
            return new ArrayList<Long>();
        } else {
            boolean reverse = (array.get(0) + array.get(array.size() - 1)) % 2 == 0;
            Collections.sort(array);
            if (reverse) {
                Collections.reverse(array);
            }
            return array;
        }
    }
}"""

SORT_ARRAY_EXP = "This function takes a list of integers `array` as input and returns a sorted list of integers. The function first checks if the input list is empty. If it is, it returns an empty list. Otherwise, it sorts the list using the `sorted` function. The `reverse` parameter is set to `True` if the sum of the first and last elements of the array is even (and the array will be sorted in descending order), otherwise, it is set to `False` (and the array will be sorted in ascending order)."

SORT_ARRAY_EXP_LBL = """The code is an implementation of sorting an array of integers. It takes a list of integers `array` as input and returns a sorted list of integers.

return [] if len(array) == 0 else sorted(array, reverse= (array[0]+array[-1]) % 2 == 0)
The function first checks if the input list is empty. If it is, it returns an empty list. Otherwise, it sorts the list using the `sorted` function. The `reverse` parameter is set to `True` if the sum of the first and last elements of the array is even (and the array will be sorted in descending order), otherwise, it is set to `False` (and the array will be sorted in ascending order)."""

SORT_ARRAY_EXP_LBL_D = """The code is an implementation of a function that sorts an array of integers. The function takes an array of integers as input and returns a sorted array of integers.

return [] if len(array) == 0 else sorted(array, reverse= (array[0]+array[-1]) % 2 == 0)
This return statement contains an inline if-else statement. Let's break it down step by step:
[] if len(array) == 0
This inline if statement checks if the length of the input array is zero. If the length of the input array is zero, the function returns an empty array. If the length of the input array is not zero, the function proceeds to else statement.
sorted(array, reverse= (array[0]+array[-1]) % 2 == 0)
This function sorts the list `array`. Let's break it down step by step:
(array[0]+array[-1]) % 2 == 0
The reverse parameter of the sorted function is set to True if the sum of the first and last elements of the input array is even. If the sum of the first and last elements of the input array is odd, the reverse parameter of the sorted function is set to False.
Hence, the else statement sorts the input array. If the sum of the first and last elements of the input array is even, it is sorted with reverse=True (descending order), otherwise, it is sorted with reverse=False (ascending order).
Hence, the entire inline if-else statement (and the return statement) returns an empty array if the length of the input array is zero. Otherwise, if the sum of the first and last element of the array is even, the array is sorted with reverse parameter set to True. If the sum of the first and last element of the array is odd, the reverse parameter is set to False."""

SHOTS = {
    "humaneval_107_even_odd_palindrome": (EOP_SOURCE, EOP_TARGET, EOP_EXP, EOP_EXP_LBL, EOP_EXP_LBL_D),
    "humaneval_126_is_sorted": (IS_SORTED_SOURCE, IS_SORTED_TARGET, IS_SORTED_EXP, IS_SORTED_EXP_LBL, IS_SORTED_EXP_LBL_D),
    "humaneval_1_separate_paren_groups": (SPG_SOURCE, SPG_TARGET, SPG_EXP, SPG_EXP_LBL, SPG_EXP_LBL_D),
    "humaneval_88_sort_array": (SORT_ARRAY_SOURCE, SORT_ARRAY_TARGET, SORT_ARRAY_EXP, SORT_ARRAY_EXP_LBL, SORT_ARRAY_EXP_LBL_D),
}


def write_fixtures():
    FIX.mkdir(exist_ok=True)
    with open(FIX / "mini_corpus.jsonl", "w") as f:
        for pid, langs in PROBLEMS:
            for lang in ("py", "js", "ts", "pl"):
                scaffold, body, tests = langs[lang]
                rec = {
                    "id": pid,
                    "language": lang,
                    "scaffold": scaffold,
                    "canonical_solution": body,
                    "tests": tests,
                }
                f.write(json.dumps(rec) + "\n")

    with open(FIX / "broken_seeds.jsonl", "w") as f:
        for rec in BROKEN:
            f.write(json.dumps(rec) + "\n")

    with open(FIX / "truncation_goldens.json", "w") as f:
        json.dump(GOLDENS, f, indent=1)
        f.write("\n")

    for variant, idx in (("exp", 2), ("exp_lbl", 3), ("exp_lbl_d", 4)):
        d = FIX / "shots" / variant
        d.mkdir(parents=True, exist_ok=True)
        for name, parts in SHOTS.items():
            rec = {
                "source_program": parts[0],
                "explanation": parts[idx],
                "target_solution": parts[1],
            }
            with open(d / f"{name}.json", "w") as f:
                json.dump(rec, f, indent=1)
                f.write("\n")


RUNNERS = {
    "py": (["python3", "{file}"], "candidate.py", None),
    "js": (["node", "{file}"], "candidate.js", None),
    "ts": (["node", "candidate.js"], "candidate.ts",
           ["tsc", "--outDir", ".", "--target", "es2020", "--module", "commonjs", "{file}"]),
    "pl": (["perl", "{file}"], "candidate.pl", None),
}


def run_program(lang, program):
    run_cmd, file_name, build_cmd = RUNNERS[lang]
    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, file_name)
        with open(path, "w") as f:
            f.write(program)
        if build_cmd:
            cmd = [a.replace("{file}", path) for a in build_cmd]
            r = subprocess.run(cmd, cwd=d, capture_output=True, text=True, timeout=60)
            if r.returncode != 0:
                return r
        cmd = [a.replace("{file}", path) for a in run_cmd]
        return subprocess.run(cmd, cwd=d, capture_output=True, text=True, timeout=60)


def verify():
    failures = []
    for pid, langs in PROBLEMS:
        for lang in ("py", "js", "ts", "pl"):
            scaffold, body, tests = langs[lang]
            program = scaffold + body + "\n" + tests
            r = run_program(lang, program)
            if r.returncode != 0:
                failures.append(f"{pid} [{lang}]:\n{r.stdout}\n{r.stderr}")
    expected_msgs = {
        ("py", "type_error"): "TypeError",
        ("py", "undeclared_error"): "NameError",
        ("py", "assertion_error"): "AssertionError",
        ("py", "runtime_error"): "ZeroDivisionError",
        ("py", "other_syntax_error"): "SyntaxError",
        ("js", "type_error"): "TypeError",
        ("js", "undeclared_error"): "ReferenceError",
        ("js", "assertion_error"): "AssertionError",
        ("js", "runtime_error"): "RangeError",
        ("js", "other_syntax_error"): "SyntaxError",
        ("ts", "type_error"): "is not assignable to",
        ("ts", "undeclared_error"): "Cannot find name",
        ("ts", "assertion_error"): "AssertionError",
        ("ts", "runtime_error"): "RangeError",
        ("ts", "other_syntax_error"): "error TS1",
        ("pl", "type_error"): "Can't locate object method",
        ("pl", "undeclared_error"): "Undefined subroutine",
        ("pl", "assertion_error"): "AssertionError",
        ("pl", "runtime_error"): "Illegal division by zero",
        ("pl", "other_syntax_error"): "syntax error",
    }
    for rec in BROKEN:
        if rec["label"] == "unhelpful":
            continue  # detected before execution, not from output
        closer = "\n}" if rec["language"] in ("js", "ts", "pl") else ""
        program = rec["scaffold"] + rec["body"] + closer + "\n" + rec["tests"]
        r = run_program(rec["language"], program)
        msg = expected_msgs[(rec["language"], rec["label"])]
        combined = r.stdout + r.stderr
        if r.returncode == 0:
            failures.append(f"seed {rec['language']}/{rec['label']}: unexpectedly passed")
        elif msg not in combined:
            failures.append(
                f"seed {rec['language']}/{rec['label']}: expected {msg!r} in output:\n{combined}"
            )
    if failures:
        print("\n\n".join(failures))
        sys.exit(1)
    print(f"verified {len(PROBLEMS)} problems x 4 languages and {len(BROKEN)} seeds")


if __name__ == "__main__":
    write_fixtures()
    verify()
