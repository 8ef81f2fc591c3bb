#!/usr/bin/env python3
"""Generate data/insurance.csv, a seeded synthetic stand-in for the
public US medical-insurance dataset (1338 rows, canonical header
age,sex,bmi,children,smoker,region,charges).

The generator mirrors the public data's marginals and its well-known
charge structure: a roughly linear age trend, a large smoker effect that
splits on obesity (BMI 30), a small children effect, and a right-skewed
high-cost band of roughly one in ten non-smokers that no feature
explains. Regenerate with:  python3 scripts/make_insurance_csv.py
"""

import numpy as np
from pathlib import Path

N = 1338
rng = np.random.RandomState(20240 + 5)

age = rng.randint(18, 65, size=N)
sex = rng.binomial(1, 0.505, size=N)  # 1 = male
bmi = np.clip(rng.normal(30.66, 6.1, size=N), 15.96, 53.13)
children = rng.choice(
    [0, 1, 2, 3, 4, 5],
    size=N,
    p=np.array([574, 324, 240, 157, 25, 18]) / 1338.0,
)
smoker = rng.binomial(1, 0.2048, size=N)
region = rng.randint(0, 4, size=N)

region_effect = np.array([0.0, -350.0, 450.0, -300.0])

charges = 250.0 * age - 3000.0 + 480.0 * children + 150.0 * sex
charges += region_effect[region]

is_smoker = smoker == 1
obese = bmi >= 30.0
charges[is_smoker & ~obese] += 14200.0 + 350.0 * (bmi[is_smoker & ~obese] - 25.0)
charges[is_smoker & obese] += 33000.0 + 450.0 * (bmi[is_smoker & obese] - 30.0)
charges[is_smoker] += rng.normal(0.0, 1800.0, size=int(is_smoker.sum()))

nonsmoker = ~is_smoker
charges[nonsmoker] += np.abs(rng.normal(0.0, 900.0, size=int(nonsmoker.sum())))
surge = nonsmoker & (rng.uniform(size=N) < 0.10)
charges[surge] += rng.uniform(8000.0, 22000.0, size=int(surge.sum()))

charges = np.maximum(charges, 1122.0)

sex_names = np.array(["female", "male"])
smoker_names = np.array(["no", "yes"])
region_names = np.array(["northeast", "northwest", "southeast", "southwest"])

out = Path(__file__).resolve().parent.parent / "data" / "insurance.csv"
out.parent.mkdir(exist_ok=True)
with out.open("w") as f:
    f.write("age,sex,bmi,children,smoker,region,charges\n")
    for i in range(N):
        f.write(
            f"{age[i]},{sex_names[sex[i]]},{bmi[i]:.3f},{children[i]},"
            f"{smoker_names[smoker[i]]},{region_names[region[i]]},"
            f"{charges[i]:.4f}\n"
        )

print(f"wrote {out} ({N} rows)")
print(f"charges: mean={charges.mean():.0f} std={charges.std():.0f} "
      f"min={charges.min():.0f} max={charges.max():.0f}")
