#!/usr/bin/env python3
"""Regenerates the synthetic per-request traces in traces/.

Each file is one request at peak-throughput load, sampled every 200 ms with
one GPU and one CPU row per timestamp. Deterministic: no randomness.
"""
import math
from pathlib import Path

MODELS = {
    # name: (latency_s, gpu_mean_w, gpu_swing_w, cpu_mean_w)
    "qwen2.5-7b": (1.8, 410.0, 35.0, 118.0),
    "qwen2.5-14b": (3.0, 520.0, 45.0, 124.0),
    "qwen2.5-32b": (5.2, 640.0, 40.0, 131.0),
}

out = Path(__file__).parent / "traces"
out.mkdir(exist_ok=True)
for name, (latency, gpu, swing, cpu) in MODELS.items():
    n = int(round(latency / 0.2)) + 1
    lines = ["timestamp_s,power_w,device"]
    for i in range(n):
        t = i * 0.2
        g = gpu + swing * math.sin(2 * math.pi * i / 7)
        c = cpu + 6.0 * math.cos(2 * math.pi * i / 5)
        lines.append(f"{t:.1f},{g:.1f},gpu")
        lines.append(f"{t:.1f},{c:.1f},cpu")
    (out / f"{name}.csv").write_text("\n".join(lines) + "\n")
