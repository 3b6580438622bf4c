"""Writes the 50-occupation taxonomy fixture and its perturbed queries.

Removals apply only to labels of three or more tokens; two-token labels
cut to one word go to a separate "residual" set.
"""

import csv
import random
from pathlib import Path

OUT = Path(__file__).parent / "esco50"
BASE = "http://data.europa.eu/esco/"

OCCUPATIONS = [
    ("data scientist", ["data science specialist"]),
    ("data analyst", ["data analytics specialist"]),
    ("software developer", ["software engineer", "programmer"]),
    ("web developer", ["web programmer"]),
    ("database administrator", ["dba"]),
    ("ICT network engineer", ["network engineer"]),
    ("ICT system administrator", ["sysadmin"]),
    ("baker", ["bread baker"]),
    ("pastry chef", []),
    ("head chef", ["executive chef"]),
    ("specialist nurse", ["registered nurse"]),
    ("hospital pharmacist", []),
    ("physiotherapist", ["physical therapist"]),
    ("dentist", []),
    ("veterinarian", ["vet"]),
    ("primary school teacher", []),
    ("higher education lecturer", ["university lecturer"]),
    ("librarian", []),
    ("accountant", ["chartered accountant"]),
    ("financial analyst", []),
    ("tax advisor", ["tax consultant"]),
    ("insurance broker", []),
    ("real estate agent", ["estate agent"]),
    ("civil engineer", []),
    ("mechanical engineer", []),
    ("domestic electrician", ["electrician"]),
    ("plumber", []),
    ("carpenter", ["joiner"]),
    ("architect", []),
    ("graphic designer", []),
    ("interior designer", []),
    ("photographer", []),
    ("journalist", ["reporter"]),
    ("translator", []),
    ("lawyer", ["attorney"]),
    ("police officer", []),
    ("firefighter", []),
    ("heavy truck driver", ["lorry driver"]),
    ("airline transport pilot", ["airline pilot"]),
    ("flight attendant", ["cabin crew member"]),
    ("hotel receptionist", []),
    ("tour guide", []),
    ("social worker", []),
    ("clinical psychologist", []),
    ("marketing manager", []),
    ("commercial sales representative", ["sales representative"]),
    ("human resources officer", ["hr officer"]),
    ("ICT project manager", ["project manager"]),
    ("machine learning engineer", []),
    ("ICT security analyst", ["information security analyst"]),
]

SKILLS = [
    "Python programming", "statistics", "SQL", "data visualisation", "machine learning", "JavaScript",
    "network security", "bake bread", "decorate cakes", "manage a kitchen", "administer medication",
    "patient care", "anatomy", "teach literacy", "lecture planning", "cataloguing", "bookkeeping",
    "financial reporting", "tax law", "risk assessment", "negotiation", "structural analysis", "CAD design",
    "wiring installation", "pipe fitting", "woodworking", "building regulations", "typography",
    "colour theory", "photo editing", "news writing", "terminology management", "contract law", "first aid",
    "route planning", "aviation safety", "customer service", "counselling", "market research",
    "project scheduling",
]

MODIFIERS = ["senior", "junior", "lead", "trainee", "assistant", "certified", "freelance", "chief"]


def slug(text):
    return text.lower().replace(" ", "-")


def main():
    rng = random.Random(2024)
    OUT.mkdir(exist_ok=True)
    with open(OUT / "occupations.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["conceptUri", "preferredLabel", "altLabels"])
        for label, alts in OCCUPATIONS:
            w.writerow([BASE + "occupation/" + slug(label), label, "|".join(alts)])
    with open(OUT / "skills.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["conceptUri", "preferredLabel", "altLabels"])
        for label in SKILLS:
            w.writerow([BASE + "skill/" + slug(label), label, ""])
    with open(OUT / "relations.csv", "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["occupationUri", "relationType", "skillUri"])
        for label, _ in OCCUPATIONS:
            for i, skill in enumerate(rng.sample(SKILLS, 3)):
                w.writerow([BASE + "occupation/" + slug(label), "essential" if i < 2 else "optional",
                            BASE + "skill/" + slug(skill)])
    with open(OUT / "queries.tsv", "w", newline="") as f:
        f.write("kind\tquery\texpected\n")
        for label, _ in OCCUPATIONS:
            f.write(f"exact\t{label.title()}\t{BASE}occupation/{slug(label)}\n")
        residual = []
        for i, (label, _) in enumerate(OCCUPATIONS):
            uri = f"{BASE}occupation/{slug(label)}"
            tokens = label.lower().split()
            if len(tokens) == 2:
                residual.append(f"residual\t{tokens[rng.randrange(2)]}\t{uri}\n")
            if i % 2 == 1 and len(tokens) >= 3:
                del tokens[rng.randrange(len(tokens))]
                kind = "remove"
            else:
                tokens.insert(rng.randrange(len(tokens) + 1), rng.choice(MODIFIERS))
                kind = "add"
            f.write(f"{kind}\t{' '.join(tokens)}\t{uri}\n")
        # Two-token labels cut to a bare word; reported separately, not part of the perturbed set.
        f.writelines(residual)

if __name__ == "__main__":
    main()
