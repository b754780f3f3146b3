import csv

from regime_dispatch import best_bracket
from stirling_types import Index
from trends import case1_trend, case2_trend, case3_trend

# Configuración de las tablas
CASE1_MS = [25, 50, 100, 200, 400]
CASE1_D = 3
CASE2_M = 5
CASE2_NS = [50, 100, 200, 400, 800]
CASE3_MS = [50, 100, 200, 400]

# Barrido de selección
SWEEP_N_MAX = 60


def write_rows(path, rows):
    with open(path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=rows[0].keys())
        writer.writeheader()
        writer.writerows(rows)
    print(f"[script_csv] {len(rows)} filas guardadas en {path}")


def main():
    write_rows("trend_case1.csv", [r.as_dict() for r in case1_trend(CASE1_MS, CASE1_D)])
    write_rows("trend_case2.csv", [r.as_dict() for r in case2_trend(CASE2_M, CASE2_NS)])
    write_rows("trend_case3.csv", [r.as_dict() for r in case3_trend(CASE3_MS)])

    results = []
    for n in range(1, SWEEP_N_MAX + 1):
        for m in range(1, n + 1):
            try:
                report = best_bracket(Index(n, m), verify=True)
            except Exception as e:
                print(f"❌ Error en S({n},{m}): {e}")
                continue
            chosen = report.chosen
            results.append({
                "n": n,
                "m": m,
                "regime": report.label.label.value,
                "method": chosen.method.value,
                "lower_log": float(chosen.lower_log),
                "upper_log": float(chosen.upper_log),
                "width": float(chosen.width),
                "lower_donor": report.donors.get(chosen.method, ""),
            })
    write_rows("dispatch_sweep.csv", results)


if __name__ == "__main__":
    main()
