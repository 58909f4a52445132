"""Regenerate the bundled fixture KB and snippet corpus.

    python scripts/build_fixture.py [output_dir]

The output is deterministic. By default it overwrites src/webqa/data/fixture/.

Layout of the wasBornIn corpus: every person has a birth city, a city where
they work and a city they grew up in. For most people ("clear" profiles) the
``born`` and ``birth`` questions surface the birth city next to the name; the
two templates return largely the same evidence. For the rest ("obscure"
profiles) both of them only surface the work city, and the birth city shows
up solely under ``birthplace``. ``hometown`` always points at the wrong city.
Every question also returns off-topic snippets that mention other cities.
"""
import json
import random
import sys
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "webqa" / "data" / "fixture"

CITIES = ["New_York_City", "Boston", "San_Francisco", "London", "Wellington", "Chicago", "Paris"]
OTHER_PLACES = {"New_York": "state", "New_Zealand": "country", "United_Kingdom": "country"}

# (person, birth city) for the people appearing in the worked examples
NAMED = [
    ("Marvin_Minsky", "New_York_City"),
    ("Henry_Minsky", "New_York_City"),
    ("Ryan_Block", "San_Francisco"),
    ("Veronica_Belmont", "Boston"),
    ("Julia_Foster", "London"),
    ("Ben_Fogle", "London"),
    ("Emily_Fogle", "London"),
    ("Bill_Fogle", "London"),
    ("Ruth_Dyson", "Wellington"),
]
FIRST = ["Alice", "Owen", "Nora", "Felix", "Clara", "Hugo", "Iris", "Jonas", "Lena", "Miles",
         "Greta", "Oscar", "Pia", "Rufus", "Selma", "Tobias", "Una", "Victor", "Wren", "Xavier",
         "Yara", "Zane", "Beatrix", "Cyrus", "Delia", "Emil", "Flora", "Gideon", "Hazel", "Ivo",
         "Juno"]
LAST = ["Hartley", "Quennell", "Ashdown", "Brightwell", "Corrigan", "Drummond", "Ellery",
        "Farrant", "Galloway", "Holloway", "Ingleby", "Jessop", "Kingsley", "Lockhart",
        "Marchetti", "Northcote", "Oakeshott", "Pemberton", "Radcliffe", "Sandoval",
        "Thackeray", "Underhill", "Vasquez", "Whitlock", "Yelland", "Zamora", "Abernathy",
        "Blackwood", "Castellan", "Dunmore", "Everett"]
OCCUPATIONS = ["novelist", "architect", "cellist", "chemist", "economist", "painter", "surgeon",
               "historian", "engineer", "photographer", "journalist", "astronomer"]
MONTHS = ["January", "February", "March", "April", "May", "June", "July", "August",
          "September", "October", "November", "December"]

BORN_SNIPPET = ("Marvin Lee Minsky was born in New York City, to an eye surgeon father, Henry, "
               "and to a mother, Fannie ...")
BIRTH_SNIPPET = ("Marvin Minsky - A.M. Turing Award Winner, BIRTH: New York City, August 9, 1927. "
                "DEATH: Boston, January 24, 2016 ...")


def city_text(c):
    return c.replace("_", " ")


def build(rng):
    persons = list(NAMED)
    used = {p for p, _ in NAMED}
    while len(persons) < 40:
        name = f"{rng.choice(FIRST)}_{rng.choice(LAST)}"
        if name in used:
            continue
        used.add(name)
        persons.append((name, rng.choice(CITIES)))

    facts = [(p, "wasBornIn", c) for p, c in persons]
    facts += [
        ("Marvin_Minsky", "diedIn", "Boston"),
        ("Henry_Minsky", "hasChild", "Marvin_Minsky"),
        ("Julia_Foster", "hasChild", "Ben_Fogle"),
        ("Julia_Foster", "hasChild", "Emily_Fogle"),
        ("Julia_Foster", "hasChild", "Bill_Fogle"),
        ("Ryan_Block", "isMarriedTo", "Veronica_Belmont"),
        ("Veronica_Belmont", "isMarriedTo", "Ryan_Block"),
        ("Ruth_Dyson", "isCitizenOf", "New_Zealand"),
        ("Julia_Foster", "isCitizenOf", "United_Kingdom"),
        ("Ben_Fogle", "isCitizenOf", "United_Kingdom"),
    ]
    synthetic = [p for p, _ in persons[len(NAMED):]]
    for a, b in zip(synthetic[0::2][:6], synthetic[1::2][:6]):
        facts += [(a, "isMarriedTo", b), (b, "isMarriedTo", a)]

    types = [(p, "person") for p, _ in persons]
    types += [(c, "city") for c in CITIES]
    types += sorted(OTHER_PLACES.items())

    labels = [
        ("Marvin Lee Minsky", "Marvin_Minsky"),
        ("Henry", "Henry_Minsky"),
        ("Emily", "Emily_Fogle"),
        ("Bill", "Bill_Fogle"),
        ("NYC", "New_York_City"),
        ("New York", "New_York"),
        ("UK", "United_Kingdom"),
    ]

    schemas = [
        ("wasBornIn", "person", "city", "born,birth,birthplace,hometown"),
        ("isMarriedTo", "person", "person", "spouse,married,marriage"),
        ("hasChild", "person", "person", "child,children,kid"),
        ("isCitizenOf", "person", "country", "citizenship,nationality,country"),
    ]

    corpus = {}
    n_obscure = 0
    for i, (p, birth) in enumerate(persons):
        name = p.replace("_", " ")
        first = p.split("_")[0]
        others = [c for c in CITIES if c != birth]
        rng.shuffle(others)
        work, home = (city_text(c) for c in others[:2])
        born_at = city_text(birth)
        occ = rng.choice(OCCUPATIONS)
        date = f"{rng.randint(1, 28)} {rng.choice(MONTHS)} {rng.randint(1920, 1990)}"
        marvin = p == "Marvin_Minsky"
        obscure = not marvin and (i % 10) in (3, 6, 9)
        missing = not marvin and (i % 10) == 4  # the web knows nothing useful
        weak_birth = not marvin and (i % 10) in (1, 7)
        n_obscure += obscure
        other_last = rng.choice([x for x in LAST if x not in p])

        def noise(lo=5, hi=10):
            out = []
            for _ in range(rng.randint(lo, hi)):
                c = city_text(rng.choice(others[1:]))
                if rng.random() < 0.15:
                    form = rng.choice([
                        f"{first} {other_last} was born in {c} and trained as a {occ} ...",
                        f"Photos of {name} at a festival in {c} last summer ...",
                        f"Top 10 famous people born in {c}, ranked by readers ...",
                        f"{c} city guide: museums, food and nightlife ...",
                        f"Genealogy records for the {other_last} family of {c} ...",
                        f"{name} to speak at {c} conference on {occ} careers ...",
                    ])
                else:
                    form = rng.choice([
                        f"{name} - Wikipedia. {name} is a {occ} known for early work ...",
                        f"Books by {name}: reviews, ratings and recommendations ...",
                        f"{name} (@{first.lower()}{rng.randint(1, 99)}) on social media ...",
                        f"Books by {first} {other_last}: reviews and ratings ...",
                        f"How to become a {occ}: salary, training and outlook ...",
                        f"{name} net worth, age, height and family facts ...",
                        f"Sign in to see more about {first} {other_last} ...",
                    ])
                out.append(form)
            return out

        if missing:
            born, birth_q, birthplace = [], [], []
        elif obscure:
            born = [
                f"{name} (born {date}) is a {occ} based in {work} ...",
                f"Interview: {name} talks about life and work in {work} ...",
            ]
            birth_q = [
                f"{name} - {occ}. Date of birth: {date}. Currently based in {work} ...",
            ]
            birthplace = [
                f"{name} birthplace: {born_at}. The {occ} later settled elsewhere ...",
            ]
        else:
            if marvin:
                born = [BORN_SNIPPET, BIRTH_SNIPPET]
                birth_q = [BIRTH_SNIPPET, BORN_SNIPPET]
            else:
                born = [
                    f"{name} was born in {born_at} on {date} ...",
                    f"{name} (born {date}) is a {occ} based in {work} ...",
                    f"{name}, a {occ} born and raised in {born_at}, recalls ...",
                ]
                birth_q = [
                    f"{name} - {occ}. BIRTH: {born_at}, {date} ...",
                    f"{name} (born {date}) is a {occ} based in {work} ...",
                ]
                if weak_birth:
                    birth_q = [f"{name} - {occ}. Date of birth: {date}. Lives in {work} ..."]
            birthplace = [
                f"What is the birthplace of {name}? Readers in {home} discuss ...",
            ]
        if not missing and rng.random() < 0.5:
            birth_q.insert(1, f"{name} celebrates the birth of a daughter in {work} ...")
        hometown = [
            f"{name} hometown: {home}, where the {occ} grew up ...",
            f"{name} was raised in {home} and still calls it hometown ...",
            f"Back to {home}: {name} returns to hometown crowds ...",
        ]

        def mix(head):
            out = noise()
            for j, s in enumerate(head):
                out.insert(min(j + rng.randint(0, 3), len(out)), s)
            return out

        corpus[f"{name} born"] = mix(born)
        corpus[f"{name} birth"] = mix(birth_q)
        corpus[f"{name} birthplace"] = mix(birthplace)
        corpus[f"{name} hometown"] = mix(hometown)

    corpus["Ryan Block spouse"] = [
        "Spouse(s), Veronica Belmont. Ryan Block (born June 25, 1982) is a San Francisco-based "
        "technology entrepreneur ...",
    ]
    corpus["Ryan Block married"] = [
        "Jul 15, 2014 ... Ryan Block, formerly of Engadget and now at AOL .... More famous for "
        "being married to Veronica Belmont IMHO ...",
    ]
    corpus["Julia Foster children"] = [
        "Children, Ben Fogle, Emily and Bill. Julia Foster (born 2 August 1943) is an English "
        "stage, screen and television actress. Born in ...",
    ]
    corpus["Julia Foster child"] = [
        "Mother Love - Ben Fogle and his mother Julia Foster ... A shy and introverted child, he "
        "often felt overwhelmed ...",
    ]
    corpus["Ruth Dyson nationality"] = [
        "Nationality, New Zealand. Political party, Labour Party ... Ruth Suzanne Dyson (born 11 "
        "August 1957) is a New Zealand politician ...",
    ]
    corpus["Ruth Dyson country"] = [
        "Ruth Suzanne Dyson (born 11 August 1957) is a New Zealand politician ... so Dyson's family "
        "frequently moved around the country.",
    ]
    return facts, types, labels, schemas, corpus, n_obscure


def write_tsv(path, header, rows):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# {header}\n")
        for row in rows:
            fh.write("\t".join(row) + "\n")


def main(out=OUT):
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    facts, types, labels, schemas, corpus, _ = build(random.Random(2017))
    write_tsv(out / "facts.tsv", "subject\trelation\tobject", facts)
    write_tsv(out / "types.tsv", "entity\ttype", types)
    write_tsv(out / "labels.tsv", "surface form\tentity", labels)
    write_tsv(out / "schemas.tsv", "relation\tsubject_type\tobject_type\ttemplates", schemas)
    with open(out / "corpus.jsonl", "w", encoding="utf-8") as fh:
        for q, snips in corpus.items():
            fh.write(json.dumps({"question": q, "snippets": snips}, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else OUT)
