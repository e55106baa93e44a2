#!/usr/bin/env python3
"""Writes the 34-bus fixture: network.json and profiles.csv.

Topology, line configurations and spot/distributed loads follow the public
IEEE 34-node test feeder. Simplifications are listed in README.md next to
this script. Run from anywhere; outputs land beside the script.
"""
import json
import math
import os

HERE = os.path.dirname(os.path.abspath(__file__))

S_BASE = 100e3
V_BASE = 24.9e3
LENGTH_SCALE = 0.5
LOW_SIDE_RATIO = (24.9 / 4.16) ** 2  # refers 4.16 kV impedances to 24.9 kV
I_MAX_PU = 11.45

# Ohm per mile, phases a, b, c.
CONFIGS = {
    "300": ([[1.3368, 0.2101, 0.2130], [0.2101, 1.3238, 0.2066], [0.2130, 0.2066, 1.3294]],
            [[1.3343, 0.5779, 0.5015], [0.5779, 1.3569, 0.4591], [0.5015, 0.4591, 1.3471]]),
    "301": ([[1.9300, 0.2327, 0.2359], [0.2327, 1.9157, 0.2288], [0.2359, 0.2288, 1.9219]],
            [[1.4115, 0.6442, 0.5691], [0.6442, 1.4281, 0.5238], [0.5691, 0.5238, 1.4209]]),
    "302": ("a", 2.7995, 1.4855),
    "303": ("b", 2.7995, 1.4855),
    "304": ("b", 1.9217, 1.4212),
}

# from, to, length (ft), configuration
SEGMENTS = [
    ("800", "802", 2580, "300"), ("802", "806", 1730, "300"), ("806", "808", 32230, "300"),
    ("808", "810", 5804, "303"), ("808", "812", 37500, "300"), ("812", "814", 29730, "300"),
    ("814", "850", 1000, "301"), ("850", "816", 310, "301"), ("816", "818", 1710, "302"),
    ("816", "824", 10210, "301"), ("818", "820", 48150, "302"), ("820", "822", 13740, "302"),
    ("824", "826", 3030, "303"), ("824", "828", 840, "301"), ("828", "830", 20440, "301"),
    ("830", "854", 520, "301"), ("854", "856", 23330, "303"), ("854", "852", 36830, "301"),
    ("852", "832", 1000, "301"), ("832", "858", 4900, "301"), ("832", "888", None, "xfm"),
    ("888", "890", 10560, "300-low"), ("858", "864", 1620, "302"), ("858", "834", 5830, "301"),
    ("834", "860", 2020, "301"), ("834", "842", 280, "301"), ("842", "844", 1350, "301"),
    ("844", "846", 3640, "301"), ("846", "848", 530, "301"), ("860", "836", 2680, "301"),
    ("836", "840", 860, "301"), ("836", "862", 280, "301"), ("862", "838", 4860, "304"),
]

# Spot loads, kW and kvar per phase.
SPOT = {
    "860": ([20, 20, 20], [16, 16, 16]),
    "840": ([9, 9, 9], [7, 7, 7]),
    "844": ([135, 135, 135], [105, 105, 105]),
    "848": ([20, 20, 20], [16, 16, 16]),
    "890": ([150, 150, 150], [75, 75, 75]),
    "830": ([10, 10, 25], [5, 5, 10]),
}

# Distributed loads lumped at the downstream bus, kW and kvar per phase.
DISTRIBUTED = {
    ("802", "806"): ([0, 30, 25], [0, 15, 14]),
    ("808", "810"): ([0, 16, 0], [0, 8, 0]),
    ("818", "820"): ([34, 0, 0], [17, 0, 0]),
    ("820", "822"): ([135, 0, 0], [70, 0, 0]),
    ("816", "824"): ([0, 5, 0], [0, 2, 0]),
    ("824", "826"): ([0, 40, 0], [0, 20, 0]),
    ("824", "828"): ([0, 0, 4], [0, 0, 2]),
    ("828", "830"): ([7, 0, 0], [3, 0, 0]),
    ("854", "856"): ([0, 4, 0], [0, 2, 0]),
    ("832", "858"): ([7, 2, 6], [3, 1, 3]),
    ("858", "864"): ([2, 0, 0], [1, 0, 0]),
    ("858", "834"): ([4, 15, 13], [2, 8, 7]),
    ("834", "860"): ([16, 20, 110], [8, 10, 55]),
    ("860", "836"): ([30, 10, 42], [15, 6, 22]),
    ("836", "840"): ([18, 22, 0], [9, 11, 0]),
    ("862", "838"): ([0, 28, 0], [0, 14, 0]),
    ("842", "844"): ([9, 0, 0], [5, 0, 0]),
    ("844", "846"): ([0, 25, 20], [0, 12, 11]),
    ("846", "848"): ([0, 23, 0], [0, 11, 0]),
}

PV_BUSES = ["830", "844", "848", "860", "890"]
WT_BUSES = ["836", "842"]
DG_BUSES = ["850", "846"]

# Hourly shapes for a 24 h day.
LOAD_SHAPE = [0.62, 0.58, 0.55, 0.54, 0.56, 0.63, 0.75, 0.88, 0.95, 0.93, 0.90, 0.89,
              0.88, 0.87, 0.86, 0.88, 0.93, 1.00, 0.99, 0.96, 0.90, 0.82, 0.73, 0.66]
PRICE = [71.3, 64.8, 60.2, 61.7, 66.1, 88.4, 142.6, 211.9, 247.3, 198.5, 156.2, 131.8,
         118.7, 109.4, 114.9, 127.3, 169.8, 232.5, 259.6, 224.1, 176.4, 123.6, 95.2, 79.9]
WIND_SHAPE = [0.62, 0.66, 0.70, 0.68, 0.64, 0.58, 0.51, 0.44, 0.38, 0.33, 0.30, 0.28,
              0.27, 0.29, 0.32, 0.36, 0.41, 0.47, 0.52, 0.57, 0.60, 0.63, 0.65, 0.64]


def pv_shape(t):
    # Clear-sky bell between 06:00 and 19:00, peak 0.85 at 12:30.
    if t < 6 or t > 19:
        return 0.0
    return round(0.85 * math.sin(math.pi * (t + 0.5 - 6) / 14.0) ** 2, 4)


def ohm_matrix(config, length_ft):
    if config == "xfm":
        # 500 kVA, R = 1.9 %, X = 4.08 % on its own rating.
        zb = V_BASE ** 2 / 500e3
        r, x = 0.019 * zb, 0.0408 * zb
        return ([[r, 0, 0], [0, r, 0], [0, 0, r]], [[x, 0, 0], [0, x, 0], [0, 0, x]], "abc")
    miles = length_ft / 5280.0 * LENGTH_SCALE
    scale = miles
    if config == "300-low":
        config = "300"
        scale *= LOW_SIDE_RATIO
    data = CONFIGS[config]
    if isinstance(data[0], str):
        phase, r, x = data
        k = "abc".index(phase)
        rm = [[0.0] * 3 for _ in range(3)]
        xm = [[0.0] * 3 for _ in range(3)]
        rm[k][k] = round(r * scale, 9)
        xm[k][k] = round(x * scale, 9)
        return rm, xm, phase
    rm = [[round(v * scale, 9) for v in row] for row in data[0]]
    xm = [[round(v * scale, 9) for v in row] for row in data[1]]
    return rm, xm, "abc"


def build_network():
    phases = {"800": "abc"}
    lines = []
    for i, (a, b, length, config) in enumerate(SEGMENTS):
        r, x, ph = ohm_matrix(config, length)
        phases[b] = ph
        lines.append({"id": f"L{a}_{b}", "from": a, "to": b, "r": r, "x": x,
                      "b_sh": [0.0, 0.0, 0.0], "i_max_pu": I_MAX_PU})
    buses = [{"id": "800", "kind": "slack", "phases": "abc"}]
    for _, b, _, _ in SEGMENTS:
        buses.append({"id": b, "kind": "pq", "phases": phases[b]})
    loads = []
    for bus, (p, q) in SPOT.items():
        loads.append({"id": f"S{bus}", "bus": bus, "phases": used_phases(p, q)})
    for (a, b), (p, q) in DISTRIBUTED.items():
        loads.append({"id": f"D{a}_{b}", "bus": b, "phases": used_phases(p, q)})

    devices = [{"id": "grid", "kind": "substation", "bus": "800", "s_tr_va": 2.5e6}]
    for i, bus in enumerate(PV_BUSES, 1):
        devices.append({"id": f"pv{i}", "kind": "pv", "bus": bus, "s_max_va": 3e5,
                        "pf_min": 0.95, "q_min_var": -93600.0, "q_max_var": 93600.0})
    for i, bus in enumerate(WT_BUSES, 1):
        devices.append({"id": f"wt{i}", "kind": "wt", "bus": bus, "s_max_va": 6e5,
                        "pf_min": 0.95, "q_min_var": -187200.0, "q_max_var": 187200.0})
    for i, bus in enumerate(DG_BUSES, 1):
        devices.append({"id": f"dg{i}", "kind": "dg", "bus": bus, "s_max_va": 8e5,
                        "pf_min": 0.9, "q_min_var": -387000.0, "q_max_var": 387000.0,
                        "cost_per_kwh": 4.23})
    devices.append({"id": "bess", "kind": "battery", "bus": "834", "s_max_va": 2e6,
                    "pf_min": 0.9, "q_min_var": -6e5, "q_max_var": 6e5,
                    "e_min_wh": 3.9e5, "e_max_wh": 3.9e6, "e_init_wh": 1.95e6,
                    "p_ch_max_w": 1.9e6, "p_dis_max_w": 1.9e6, "eta_rt": 0.9,
                    "self_discharge_per_h": 0.001})
    return {
        "format": "gridhorizon-network",
        "version": 1,
        "bases": {"s_base_va": S_BASE, "v_base_v": V_BASE, "dt_h": 1.0},
        "limits": {"v_min_pu": 0.95, "v_max_pu": 1.05},
        "buses": buses,
        "lines": lines,
        "loads": loads,
        "devices": devices,
    }


def used_phases(p, q):
    return "".join(ph for k, ph in enumerate("abc") if p[k] or q[k])


def build_profiles(net):
    header = ["t", "price"]
    pv = [d["id"] for d in net["devices"] if d["kind"] == "pv"]
    wt = [d["id"] for d in net["devices"] if d["kind"] == "wt"]
    header += pv + wt
    per_phase = []
    for load in net["loads"]:
        key = load["id"]
        if key.startswith("S"):
            p, q = SPOT[key[1:]]
        else:
            a, b = key[1:].split("_")
            p, q = DISTRIBUTED[(a, b)]
        for name, series in (("p", p), ("q", q)):
            for k, ph in enumerate("abc"):
                if ph in load["phases"]:
                    header.append(f"{key}.{name}.{ph}")
                    per_phase.append(series[k] * 1e3 / S_BASE)
    rows = []
    for t in range(24):
        row = [str(t), f"{PRICE[t]:g}"]
        row += [f"{3.0 * pv_shape(t):.4f}" for _ in pv]
        row += [f"{6.0 * WIND_SHAPE[t]:.4f}" for _ in wt]
        row += [f"{v * LOAD_SHAPE[t]:.6f}" for v in per_phase]
        rows.append(",".join(row))
    return "# horizon: 24\n" + ",".join(header) + "\n" + "\n".join(rows) + "\n"


def main():
    net = build_network()
    with open(os.path.join(HERE, "network.json"), "w") as f:
        json.dump(net, f, indent=1)
        f.write("\n")
    with open(os.path.join(HERE, "profiles.csv"), "w") as f:
        f.write(build_profiles(net))


if __name__ == "__main__":
    main()
