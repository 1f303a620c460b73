"""Built JS client against a live server: the two ends of the wire protocol."""

import json
import math
import shutil
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from test_cli import _free_port, _wait_for

FRONTEND = Path(__file__).parent.parent / "frontend"
CLIENT_JS = FRONTEND / "dist" / "plotwire-client.js"

pytestmark = pytest.mark.skipif(
    shutil.which("node") is None or not CLIENT_JS.exists(),
    reason="needs node and a built frontend (npm run build)",
)


def test_client_drives_real_server(tmp_path, rng):
    rows = ["x,y,name"] + [
        f"{x:.5f},{y:.5f},star{i}"
        for i, (x, y) in enumerate(rng.normal(0, 1, (500, 2)))
    ]
    (tmp_path / "pts.csv").write_text("\n".join(rows) + "\n")
    port = _free_port()
    server = subprocess.Popen(
        [sys.executable, "-m", "plotwire.cli", "serve",
         "--data", str(tmp_path), "--port", str(port)],
        stdout=subprocess.PIPE, stderr=subprocess.STDOUT,
    )
    try:
        _wait_for(f"http://127.0.0.1:{port}/api/tables")
        proc = subprocess.run(
            ["node", str(FRONTEND / "e2e" / "drive.mjs"), str(port), "pts"],
            capture_output=True, timeout=60, text=True,
        )
        assert proc.returncode == 0, proc.stdout + proc.stderr
        result = json.loads(proc.stdout.strip().splitlines()[-1])
        assert result["ok"], result
        assert result["errors"] == []
        # 20 coalesced wheel ticks accumulated to exactly 1.2^20 on the server
        assert math.isclose(result["netZoomSpanRatio"], 1.2 ** 20, rel_tol=1e-6)
        assert result["seqAfterZoom"] >= 1
        # identify returned a full row through the only row-bearing endpoint
        assert result["identify"]["row"]["cells"]["name"].startswith("star")
        assert result["listenersLeft"] == 0
        assert result["domLeft"] == 0
    finally:
        server.kill()
        server.wait()
