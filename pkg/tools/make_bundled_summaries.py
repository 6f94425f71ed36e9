"""Write the bundled per-application summaries under src/wfsynth/recipes/data/.

The values are illustrative: families follow the per-application lists of
distributions observed in production traces, parameters and bounds are
hand-chosen to give plausible runtimes (s) and sizes (bytes).
"""

import json
from pathlib import Path

from wfsynth.stats.distributions import DistributionSpec

OUT = Path(__file__).resolve().parents[1] / "src" / "wfsynth" / "recipes" / "data"

KB, MB, GB = 1e3, 1e6, 1e9


def m(name, params, lo, hi, size=False):
    DistributionSpec(name, tuple(params))
    if size:
        lo, hi = float(int(lo)), float(int(hi))
    return {"min": lo, "max": hi, "distribution": {"name": name, "params": list(params)}}


def t(runtime, inp, out):
    return {"runtime": m(*runtime), "inputSize": m(*inp, size=True), "outputSize": m(*out, size=True)}


APPS = {
    "seismology": {
        "sG1IterDecon": t(("argus", [1.0, 0.5, 30.0], 0.5, 30.5),
                          ("levy", [120 * KB, 25 * KB], 125 * KB, 6 * MB),
                          ("alpha", [3.0, 0.0, 60 * KB], 8 * KB, 150 * KB)),
        "wrapper_siftSTFByMisfit": t(("alpha", [4.0, 0.0, 4.0], 0.42, 4.8),
                                     ("fisk", [2.5, 0.0, 20 * MB], 1 * MB, 400 * MB),
                                     ("argus", [1.0, 50 * KB, 400 * KB], 60 * KB, 440 * KB)),
    },
    "genome1000": {
        "individuals": t(("skewnorm", [11115267.652937062, -2.9628504044929433e-05, 56.03957070238482],
                          48.846, 192.232),
                         ("trapz", [0.2, 0.8, 800 * MB, 400 * MB], 810 * MB, 1190 * MB),
                         ("fisk", [4.0, 0.0, 60 * MB], 15 * MB, 240 * MB)),
        "individuals_merge": t(("chi2", [6.0, 10.0, 4.0], 12.0, 120.0),
                               ("levy", [200 * MB, 50 * MB], 210 * MB, 4 * GB),
                               ("skewnorm", [4.0, 100 * MB, 80 * MB], 100 * MB, 420 * MB)),
        "sifting": t(("alpha", [2.5, 0.0, 60.0], 6.0, 140.0),
                     ("trapz", [0.1, 0.9, 250 * MB, 100 * MB], 255 * MB, 345 * MB),
                     ("chi2", [3.0, 0.0, 4 * MB], 200 * KB, 60 * MB)),
        "mutation_overlap": t(("fisk", [6.0, 0.0, 180.0], 90.0, 540.0),
                              ("levy", [300 * MB, 20 * MB], 305 * MB, 1 * GB),
                              ("alpha", [3.0, 0.0, 30 * MB], 3 * MB, 80 * MB)),
        "frequency": t(("skewnorm", [3.0, 600.0, 450.0], 600.0, 2280.0),
                       ("levy", [300 * MB, 20 * MB], 305 * MB, 1 * GB),
                       ("trapz", [0.3, 0.7, 20 * MB, 40 * MB], 21 * MB, 59 * MB)),
    },
    "epigenomics": {
        "fastqSplit": t(("wald", [2.0, 30.0], 5.0, 200.0),
                        ("trapz", [0.3, 0.7, 500 * MB, 1 * GB], 520 * MB, 1480 * MB),
                        ("beta", [4.0, 4.0, 500 * MB, 1 * GB], 560 * MB, 1440 * MB)),
        "filterContams": t(("alpha", [3.0, 0.0, 6.0], 0.8, 9.0),
                           ("beta", [2.0, 5.0, 5 * MB, 40 * MB], 5500 * KB, 40 * MB),
                           ("beta", [2.0, 5.0, 4 * MB, 30 * MB], 4500 * KB, 30 * MB)),
        "sol2sanger": t(("fisk", [5.0, 0.0, 0.8], 0.3, 2.5),
                        ("beta", [2.0, 5.0, 4 * MB, 30 * MB], 4500 * KB, 30 * MB),
                        ("chi2", [4.0, 3 * MB, 2 * MB], 3500 * KB, 40 * MB)),
        "fast2bfq": t(("levy", [0.5, 0.3], 0.6, 9.0),
                      ("chi2", [4.0, 3 * MB, 2 * MB], 3500 * KB, 40 * MB),
                      ("fisk", [4.0, 0.0, 3 * MB], 800 * KB, 12 * MB)),
        "map": t(("chi2", [5.0, 80.0, 30.0], 90.0, 900.0),
                 ("fisk", [4.0, 0.0, 3 * MB], 800 * KB, 12 * MB),
                 ("wald", [2 * MB, 3 * MB], 2300 * KB, 40 * MB)),
        "mapMerge": t(("fisk", [3.0, 0.0, 20.0], 2.0, 180.0),
                      ("levy", [20 * MB, 10 * MB], 22 * MB, 2 * GB),
                      ("beta", [2.0, 2.0, 30 * MB, 300 * MB], 40 * MB, 320 * MB)),
        "maqIndex": t(("wald", [30.0, 40.0], 35.0, 300.0),
                      ("beta", [2.0, 2.0, 30 * MB, 300 * MB], 40 * MB, 320 * MB),
                      ("trapz", [0.2, 0.8, 40 * MB, 100 * MB], 42 * MB, 138 * MB)),
        "pileup": t(("alpha", [2.0, 20.0, 100.0], 35.0, 400.0),
                    ("trapz", [0.2, 0.8, 40 * MB, 100 * MB], 42 * MB, 138 * MB),
                    ("chi2", [3.0, 1 * MB, 2 * MB], 1100 * KB, 30 * MB)),
    },
    "montage": {
        "mProject": t(("skewnorm", [2.0, 8.0, 4.0], 6.0, 22.0),
                      ("beta", [3.0, 3.0, 1 * MB, 4 * MB], 1200 * KB, 4800 * KB),
                      ("chi", [3.0, 6 * MB, 2 * MB], 6200 * KB, 16 * MB)),
        "mDiffFit": t(("rdist", [3.0, 1.0, 0.8], 0.25, 1.75),
                      ("chi", [3.0, 6 * MB, 2 * MB], 6200 * KB, 16 * MB),
                      ("pareto", [3.0, 0.0, 200 * KB], 200 * KB, 3 * MB)),
        "mConcatFit": t(("chi2", [3.0, 10.0, 5.0], 11.0, 90.0),
                        ("fisk", [3.0, 0.0, 50 * MB], 5 * MB, 2 * GB),
                        ("cosine", [300 * KB, 60 * KB], 130 * KB, 480 * KB)),
        "mBgModel": t(("levy", [30.0, 10.0], 32.0, 600.0),
                      ("cosine", [300 * KB, 60 * KB], 130 * KB, 480 * KB),
                      ("wald", [20 * KB, 40 * KB], 25 * KB, 400 * KB)),
        "mBackground": t(("cosine", [2.0, 0.5], 0.5, 3.5),
                         ("wald", [20 * KB, 40 * KB], 25 * KB, 400 * KB),
                         ("chi", [3.0, 6 * MB, 2 * MB], 6200 * KB, 16 * MB)),
        "mImgtbl": t(("alpha", [3.0, 0.0, 20.0], 2.0, 30.0),
                     ("fisk", [3.0, 0.0, 1 * GB], 100 * MB, 30 * GB),
                     ("rdist", [3.0, 500 * KB, 300 * KB], 210 * KB, 790 * KB)),
        "mAdd": t(("chi2", [4.0, 60.0, 40.0], 70.0, 900.0),
                  ("rdist", [3.0, 500 * KB, 300 * KB], 210 * KB, 790 * KB),
                  ("skewnorm", [3.0, 1 * GB, 800 * MB], 1 * GB, 4 * GB)),
        "mViewer": t(("wald", [20.0, 30.0], 22.0, 250.0),
                     ("skewnorm", [3.0, 1 * GB, 800 * MB], 1 * GB, 4 * GB),
                     ("pareto", [2.5, 0.0, 40 * MB], 40 * MB, 400 * MB)),
    },
    "cycles": {
        "baseline_cycles": t(("skewnorm", [4.0, 40.0, 30.0], 40.0, 160.0),
                             ("triang", [0.3, 2 * MB, 6 * MB], 2100 * KB, 7900 * KB),
                             ("chi", [4.0, 0.0, 3 * MB], 1500 * KB, 14 * MB)),
        "cycles": t(("triang", [0.4, 60.0, 180.0], 62.0, 238.0),
                    ("chi", [4.0, 0.0, 3 * MB], 1500 * KB, 14 * MB),
                    ("levy", [5 * MB, 2 * MB], 5200 * KB, 400 * MB)),
        "fertilizer_increase_cycles": t(("chi", [3.0, 50.0, 40.0], 55.0, 260.0),
                                        ("levy", [5 * MB, 2 * MB], 5200 * KB, 400 * MB),
                                        ("beta", [2.0, 3.0, 5 * MB, 20 * MB], 5200 * KB, 24 * MB)),
        "cycles_fertilizer_increase_output_parser": t(
            ("pareto", [4.0, 0.0, 1.5], 1.5, 8.0),
            ("beta", [2.0, 3.0, 5 * MB, 20 * MB], 5200 * KB, 24 * MB),
            ("cosine", [400 * KB, 80 * KB], 160 * KB, 640 * KB)),
        "cycles_output_summary": t(("fisk", [3.0, 0.0, 4.0], 0.8, 30.0),
                                   ("levy", [400 * KB, 300 * KB], 450 * KB, 200 * MB),
                                   ("rdist", [4.0, 1 * MB, 800 * KB], 250 * KB, 1750 * KB)),
        "cycles_fertilizer_increase_output_summary": t(
            ("alpha", [3.0, 0.0, 15.0], 2.0, 25.0),
            ("rdist", [4.0, 3 * MB, 2 * MB], 1100 * KB, 4900 * KB),
            ("chi2", [4.0, 1 * MB, 500 * KB], 1100 * KB, 12 * MB)),
        "cycles_plots": t(("levy", [40.0, 20.0], 44.0, 600.0),
                          ("chi2", [4.0, 1 * MB, 500 * KB], 1100 * KB, 12 * MB),
                          ("skewnorm", [3.0, 20 * MB, 10 * MB], 20 * MB, 60 * MB)),
    },
    "soykb": {
        "alignment_to_reference": t(("gamma", [6.0, 20.0, 25.0], 40.0, 600.0),
                                    ("uniform", [1 * GB, 2 * GB], 1 * GB, 3 * GB),
                                    ("triang", [0.4, 500 * MB, 1 * GB], 510 * MB, 1490 * MB)),
        "sort_sam": t(("rayleigh", [5.0, 20.0], 6.0, 80.0),
                      ("triang", [0.4, 500 * MB, 1 * GB], 510 * MB, 1490 * MB),
                      ("triang", [0.4, 500 * MB, 1 * GB], 510 * MB, 1490 * MB)),
        "dedup": t(("dweibull", [2.0, 40.0, 10.0], 15.0, 65.0),
                   ("triang", [0.4, 500 * MB, 1 * GB], 510 * MB, 1490 * MB),
                   ("uniform", [400 * MB, 800 * MB], 400 * MB, 1200 * MB)),
        "add_replace": t(("levy", [10.0, 5.0], 11.0, 200.0),
                         ("uniform", [400 * MB, 800 * MB], 400 * MB, 1200 * MB),
                         ("uniform", [400 * MB, 800 * MB], 400 * MB, 1200 * MB)),
        "realign_target_creator": t(("fisk", [4.0, 0.0, 120.0], 40.0, 500.0),
                                    ("uniform", [400 * MB, 800 * MB], 400 * MB, 1200 * MB),
                                    ("gamma", [2.0, 0.0, 200 * KB], 20 * KB, 2 * MB)),
        "indel_realign": t(("skewnorm", [5.0, 100.0, 80.0], 100.0, 420.0),
                           ("gamma", [2.0, 0.0, 200 * KB], 20 * KB, 2 * MB),
                           ("trapz", [0.2, 0.8, 400 * MB, 800 * MB], 410 * MB, 1190 * MB)),
        "haplotype_caller": t(("gamma", [5.0, 100.0, 60.0], 130.0, 1200.0),
                              ("trapz", [0.2, 0.8, 400 * MB, 800 * MB], 410 * MB, 1190 * MB),
                              ("argus", [1.0, 10 * MB, 40 * MB], 11 * MB, 49 * MB)),
        "merge_gcvf": t(("triang", [0.2, 20.0, 120.0], 21.0, 139.0),
                        ("argus", [1.0, 80 * MB, 300 * MB], 90 * MB, 380 * MB),
                        ("rayleigh", [50 * MB, 60 * MB], 55 * MB, 300 * MB)),
        "genotype_gvcfs": t(("gamma", [8.0, 200.0, 50.0], 300.0, 1500.0),
                            ("rayleigh", [50 * MB, 60 * MB], 55 * MB, 2 * GB),
                            ("uniform", [40 * MB, 40 * MB], 40 * MB, 80 * MB)),
        "select_variants_snp": t(("rayleigh", [10.0, 15.0], 11.0, 80.0),
                                 ("uniform", [40 * MB, 40 * MB], 40 * MB, 80 * MB),
                                 ("dweibull", [2.0, 30 * MB, 8 * MB], 10 * MB, 50 * MB)),
        "filtering_snp": t(("uniform", [5.0, 20.0], 5.0, 25.0),
                           ("dweibull", [2.0, 30 * MB, 8 * MB], 10 * MB, 50 * MB),
                           ("dweibull", [2.0, 30 * MB, 8 * MB], 10 * MB, 50 * MB)),
        "select_variants_indel": t(("rayleigh", [8.0, 12.0], 9.0, 70.0),
                                   ("uniform", [40 * MB, 40 * MB], 40 * MB, 80 * MB),
                                   ("fisk", [4.0, 0.0, 5 * MB], 1 * MB, 30 * MB)),
        "filtering_indel": t(("uniform", [4.0, 16.0], 4.0, 20.0),
                             ("fisk", [4.0, 0.0, 5 * MB], 1 * MB, 30 * MB),
                             ("fisk", [4.0, 0.0, 5 * MB], 1 * MB, 30 * MB)),
        "combine_variants": t(("skewnorm", [3.0, 20.0, 20.0], 20.0, 100.0),
                              ("levy", [20 * MB, 10 * MB], 22 * MB, 400 * MB),
                              ("skewnorm", [3.0, 40 * MB, 20 * MB], 40 * MB, 120 * MB)),
    },
}


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for app, body in APPS.items():
        (OUT / f"{app}.json").write_text(json.dumps(body, sort_keys=True, indent=4) + "\n")
        print(f"wrote {app}.json ({len(body)} task types)")


if __name__ == "__main__":
    main()
