"""Generates the synthetic 46 x 14 universities table in data/universities.csv.

The values are invented; only the schema (46 schools, 14 attributes) follows
the case study this fixture stands in for. Run from the repository root:

    python3 tools/fixtures/make_universities.py
"""

import csv

import numpy as np

PLACES = ["Northfield", "Lakeshore", "Granite", "Riverside", "Cedar", "Harbor", "Summit", "Prairie",
          "Westbrook", "Eastgate", "Highland", "Bayview", "Stonebridge", "Maple", "Redwood", "Silver",
          "Oakmont", "Pinecrest", "Clearwater", "Fairview", "Ironwood", "Brookhaven", "Sunset"]
KINDS = ["University", "State University", "College", "Institute of Technology"]

ATTRIBUTES = ["academic", "athletic", "housing", "location", "nightlife", "safety", "transportation",
              "weather", "score", "tuition", "dining", "phd_faculty", "population", "income"]


def main():
    rng = np.random.default_rng(20160607)
    n = 46
    names = []
    while len(names) < n:
        name = f"{rng.choice(PLACES)} {rng.choice(KINDS)}"
        if name not in names:
            names.append(name)

    quality = rng.normal(0.0, 1.0, n)
    urban = rng.normal(0.0, 1.0, n)
    sport = rng.normal(0.0, 1.0, n)
    public = rng.random(n) < 0.5

    def score10(latent, noise=0.6):
        return np.clip(6.5 + 1.5 * latent + rng.normal(0.0, noise, n), 1.0, 10.0).round(1)

    academic = score10(quality)
    athletic = score10(0.6 * sport + 0.3 * quality)
    housing = score10(-0.3 * urban + 0.2 * quality)
    location = score10(urban)
    nightlife = score10(0.9 * urban)
    safety = score10(-0.6 * urban + 0.3 * quality)
    transportation = score10(0.8 * urban)
    weather = score10(rng.normal(0.0, 1.0, n), noise=0.8)
    dining = score10(0.4 * quality + 0.3 * urban)
    score = np.clip(60 + 12 * quality + 4 * sport + rng.normal(0, 4, n), 30, 100).round(0)
    base = np.where(public, 12000.0, 34000.0)
    tuition = np.clip(base + 5000 * quality + rng.normal(0, 2500, n), 6000, 58000).round(-2)
    phd_faculty = np.clip(82 + 7 * quality + rng.normal(0, 3, n), 55, 99).round(0)
    population = np.clip(18000 + 9000 * urban + np.where(public, 9000, -6000) + rng.normal(0, 4000, n),
                         1500, 65000).round(-2)
    income = np.clip(52000 + 9000 * quality + 3000 * urban + rng.normal(0, 3000, n), 30000, 95000).round(-2)

    # A handful of schools that meet academic > 9, athletic > 9 and tuition < 18000.
    for i in (5, 17, 33):
        academic[i] = round(9.2 + 0.2 * rng.random(), 1)
        athletic[i] = round(9.1 + 0.3 * rng.random(), 1)
        tuition[i] = round(12000 + 4000 * rng.random(), -2)

    columns = [academic, athletic, housing, location, nightlife, safety, transportation, weather, score,
               tuition, dining, phd_faculty, population, income]
    with open("data/universities.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["name"] + ATTRIBUTES)
        for i in range(n):
            row = [names[i]]
            for c in columns:
                v = float(c[i])
                row.append(int(v) if v.is_integer() else v)
            w.writerow(row)


if __name__ == "__main__":
    main()
