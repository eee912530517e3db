"""Writes the synthetic pull-request fixture (acme/widgets#7).

Every response below is authored by hand; this script only base64-encodes file
contents and names each file after its API path. Run from this directory.
"""
import base64
import json
import re

V1 = "def add(a, b):\n    return a + b\n\n\ndef sub(a, b):\n    return a - b\n\n\ndef mul(a, b):\n    return a * b\n"
V2 = ("def add(a, b):\n    return a + b\n\n\ndef sub(a, b):\n    result = a - b\n    return result\n\n\n"
      "def mul(a, b):\n    return a * b\n")
V3 = V2 + "\n\ndef div(a, b):\n    return a / b\n"
V4 = V3.replace("    result = a - b\n    return result\n", "    return a - b\n")

SHAS = ["c1" * 20, "c2" * 20, "c3" * 20, "c4" * 20]
FILES = dict(zip(SHAS, [V1, V2, V3, V4]))

PATCH_C1_C3 = ("@@ -3,8 +3,13 @@\n \n \n def sub(a, b):\n-    return a - b\n+    result = a - b\n+    return result\n"
               " \n \n def mul(a, b):\n     return a * b\n+\n+\n+def div(a, b):\n+    return a / b")
PATCH_C2_C3 = "@@ -9,3 +9,7 @@\n \n def mul(a, b):\n     return a * b\n+\n+\n+def div(a, b):\n+    return a / b"
PATCH_C1_C2 = ("@@ -3,8 +3,9 @@\n \n \n def sub(a, b):\n-    return a - b\n+    result = a - b\n+    return result\n"
               " \n \n def mul(a, b):\n     return a * b")

COMMENTS = [
    {"id": 101, "commit_id": SHAS[2], "path": "calc.py", "line": 7,
     "body": "Please inline the temporary variable.",
     "diff_hunk": "@@ -3,8 +3,13 @@\n \n \n def sub(a, b):\n-    return a - b\n+    result = a - b\n+    return result"},
    {"id": 102, "commit_id": SHAS[2], "path": "calc.py", "line": 7, "in_reply_to_id": 101,
     "body": "Agreed.", "diff_hunk": "@@ -3,8 +3,13 @@\n \n \n def sub(a, b):\n-    return a - b\n+    result = a - b\n+    return result"},
    {"id": 103, "commit_id": SHAS[1], "path": "calc.py", "line": 2,
     "body": "Why the extra term here?",
     "diff_hunk": "@@ -1,2 +1,2 @@\n def add(a, b):\n+    return a + b + 0"},
    {"id": 104, "commit_id": SHAS[2], "path": "calc.py", "line": None,
     "body": "This line is gone.",
     "diff_hunk": "@@ -5,2 +5,2 @@\n def sub(a, b):\n-    return a - b"},
]


def name(path):
    return re.sub(r"[^A-Za-z0-9._-]", "_", path) + ".json"


def write(path, body):
    with open(name(path), "w") as f:
        json.dump(body, f, indent=1)
        f.write("\n")


base = "/repos/acme/widgets"
write(base + "/pulls/7/commits?per_page=100&page=1", [{"sha": s} for s in SHAS])
write(base + "/pulls/7/comments?per_page=100&page=1", COMMENTS)
for sha, text in FILES.items():
    write(f"{base}/contents/calc.py?ref={sha}",
          {"encoding": "base64", "content": base64.encodebytes(text.encode()).decode()})
for a, b, patch in [(0, 2, PATCH_C1_C3), (1, 2, PATCH_C2_C3), (0, 1, PATCH_C1_C2)]:
    write(f"{base}/compare/{SHAS[a]}...{SHAS[b]}",
          {"files": [{"filename": "README.md", "patch": "@@ -1 +1 @@\n-x\n+y"},
                     {"filename": "calc.py", "patch": patch}]})
