"""Structural templates for the six bundled applications.

Growth order (the round-robin order of ``params``) is fixed per recipe:

seismology   n                       n + 1 tasks
genome1000   width, chromosomes<=4   chromosomes * (6*width + 16)
epigenomics  lanes, width            lanes * (4*width + 2) + 3
montage      images                  3*images + 5
cycles       lanes, width            lanes * (4*width + 1) + ceil(lanes/4) + 1
soykb        samples                 7*samples + ceil(samples/8) + 6
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from wfsynth.recipes.patterns import (
    RecipeTemplate,
    cross,
    fan,
    merge_all,
    merge_groups,
    pipeline,
)
from wfsynth.stats.summary import loads_summaries

RECIPE_NAMES = ("seismology", "genome1000", "epigenomics", "montage", "cycles", "soykb")

_TEMPLATES = {
    # deconvolutions merged by a single task
    "seismology": RecipeTemplate(
        name="seismology",
        params=("n",),
        min_params=(1,),
        levels=(
            fan("sG1IterDecon", "n"),
            merge_all("wrapper_siftSTFByMisfit"),
        ),
        description="n seismogram deconvolutions merged by one task",
    ),
    # per chromosome: `width` six-task pipelines, a merge, a sifting task,
    # and 7 + 7 combine tasks reading both; past 4 chromosomes only width
    # grows, so the combine stage's share shrinks with scale
    "genome1000": RecipeTemplate(
        name="genome1000",
        params=("width", "chromosomes"),
        min_params=(1, 1),
        max_params=(None, 4),
        branches="chromosomes",
        levels=(
            pipeline(["individuals"], width="width", depth=6),
            merge_all("individuals_merge"),
            fan("sifting", 1, sources=()),
            fan("mutation_overlap", 7, sources=(-2, -1)),
            fan("frequency", 7, sources=(-3, -2)),
        ),
        description="per-chromosome 6-task pipelines feeding merge and combine tasks",
    ),
    # per lane: split, `width` four-stage filter/convert/map pipelines, lane merge;
    # then a global merge, index and pileup
    "epigenomics": RecipeTemplate(
        name="epigenomics",
        params=("lanes", "width"),
        min_params=(1, 1),
        branches="lanes",
        levels=(
            fan("fastqSplit", 1),
            pipeline(["filterContams", "sol2sanger", "fast2bfq", "map"], width="width"),
            merge_all("mapMerge"),
        ),
        final_levels=(
            merge_all("mapMerge"),
            pipeline(["maqIndex", "pileup"]),
        ),
        description="multi-lane split/map pipelines with hierarchical merges",
    ),
    # project, pairwise difference fits over cyclic neighbours, global fit,
    # background correction fan-out, then the mosaic chain
    "montage": RecipeTemplate(
        name="montage",
        params=("images",),
        min_params=(2,),
        levels=(
            fan("mProject", "images"),
            cross("mDiffFit", 2),
            merge_all("mConcatFit"),
            merge_all("mBgModel"),
            fan("mBackground", "images"),
            merge_all("mImgtbl"),
            pipeline(["mAdd", "mViewer"]),
        ),
        description="extreme fan-in/fan-out mosaic workflow",
    ),
    # per lane: `width` four-stage crop simulation pipelines and a lane summary;
    # lane summaries merged in groups of four, then plotted
    "cycles": RecipeTemplate(
        name="cycles",
        params=("lanes", "width"),
        min_params=(1, 1),
        branches="lanes",
        levels=(
            pipeline(["baseline_cycles", "cycles", "fertilizer_increase_cycles",
                      "cycles_fertilizer_increase_output_parser"], width="width"),
            merge_all("cycles_output_summary"),
        ),
        final_levels=(
            merge_groups("cycles_fertilizer_increase_output_summary", 4),
            merge_all("cycles_plots"),
        ),
        description="multi-lane crop simulation pipelines with grouped summaries",
    ),
    # per sample: six-stage alignment pipeline and a haplotype call; calls
    # merged in groups of eight, jointly genotyped, split into SNP and indel
    # filtering branches and recombined
    "soykb": RecipeTemplate(
        name="soykb",
        params=("samples",),
        min_params=(1,),
        levels=(
            pipeline(["alignment_to_reference", "sort_sam", "dedup", "add_replace",
                      "realign_target_creator", "indel_realign"], width="samples"),
            pipeline(["haplotype_caller"]),
            merge_groups("merge_gcvf", 8),
            merge_all("genotype_gvcfs"),
            fan("select_variants_snp", 1),
            fan("filtering_snp", 1),
            fan("select_variants_indel", 1, sources=(-3,)),
            fan("filtering_indel", 1),
            merge_all("combine_variants", sources=(-3, -1)),
        ),
        description="per-sample variant calling pipelines with joint genotyping",
    ),
}


def bundled_summaries_text(name: str) -> str:
    return resources.files("wfsynth.recipes").joinpath("data", f"{name}.json").read_text("utf-8")


@lru_cache(maxsize=None)
def get_recipe(name: str) -> RecipeTemplate:
    """Built-in template with its bundled summaries attached."""
    try:
        template = _TEMPLATES[name]
    except KeyError:
        raise KeyError(f"unknown recipe {name!r}; choose from {', '.join(RECIPE_NAMES)}") from None
    return template.with_summaries(loads_summaries(bundled_summaries_text(name)))


def template(name: str) -> RecipeTemplate:
    """Built-in template without summaries."""
    return _TEMPLATES[name]
