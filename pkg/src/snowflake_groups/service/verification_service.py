"""
Verification pipelines for the Klein-bottle rewrite of R_{p,q} and for the
index-2 cover of R_{p,q} by G_{p,q}.

Each stage is recorded as a CheckResult. A library error inside a stage is
logged and marks that stage as the failing one; later stages are skipped.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

from ..algebra.coset import (
    CosetTable,
    SubgroupDatum,
    kernel_subgroup,
    reidemeister_schreier,
    relators_close,
    schreier_generators,
    todd_coxeter,
)
from ..algebra.hnn import HnnFamily, is_trivial, make_hnn
from ..algebra.presentations import (
    KLEIN_ALPHABET,
    R_ALPHABET,
    SNOWFLAKE_ALPHABET,
    CharacterMap,
    Presentation,
    TietzeResult,
    abelian_invariants,
    character_check,
    klein_inverse_map,
    klein_rewrite_map,
    make_klein_form,
    make_snowflake_G,
    r_pq,
    tietze_simplify,
)
from ..algebra.words import GeneratorMap, Word, format_word, free_reduce, parse_word, substitute
from ..config.limits_config import Limits
from ..exceptions import ResourceLimitError, SnowflakeError

logger = logging.getLogger(__name__)

COVER_INDEX = 2


@dataclass
class CheckResult:
    stage: str
    description: str
    passed: bool
    detail: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "stage": self.stage,
            "description": self.description,
            "passed": self.passed,
            "detail": self.detail,
        }


@dataclass
class VerificationReport:
    name: str
    p: int
    q: int
    checks: List[CheckResult] = field(default_factory=list)
    failed_stage: Optional[str] = None
    resource_exhausted: bool = False

    @property
    def passed(self) -> bool:
        return self.failed_stage is None and all(check.passed for check in self.checks)

    def record(self, stage: str, description: str, passed: bool, detail: str = "") -> bool:
        self.checks.append(CheckResult(stage, description, passed, detail))
        if not passed and self.failed_stage is None:
            self.failed_stage = stage
        return passed

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "p": self.p,
            "q": self.q,
            "passed": self.passed,
            "failed_stage": self.failed_stage,
            "resource_exhausted": self.resource_exhausted,
            "checks": [check.to_dict() for check in self.checks],
        }


@dataclass
class CoverReport(VerificationReport):
    table: Optional[CosetTable] = None
    subgroup: Optional[SubgroupDatum] = None
    rewritten: Optional[Presentation] = None
    simplified: Optional[TietzeResult] = None

    def to_dict(self) -> Dict[str, Any]:
        data = super().to_dict()
        if self.table is not None:
            data["index"] = self.table.index
            data["transversal"] = [format_word(w, self.table.alphabet) for w in self.table.transversal]
        if self.simplified is not None:
            data["simplified"] = self.simplified.presentation.to_dict()
        return data


def _run_stage(
    report: VerificationReport, stage: str, action: Callable[[], bool], propagate_limits: bool = False
) -> bool:
    try:
        return action()
    except ResourceLimitError as e:
        if propagate_limits:
            raise
        logger.error(f"Stage '{stage}' hit a resource limit: {e}")
        report.resource_exhausted = True
        report.record(stage, "stage exceeded a resource limit", False, str(e))
        return False
    except SnowflakeError as e:
        logger.error(f"Stage '{stage}' failed for {report.name}(p={report.p}, q={report.q}): {e}")
        report.record(stage, "stage raised an error", False, str(e))
        return False


def verify_rewrite(p: int, q: int) -> VerificationReport:
    """
    Check the Klein-bottle rewrite of R_{p,q}.

    The forward map x -> a, y -> ab, t -> t and the backward map
    a -> x, b -> x^-1 y, t -> t must compose to the identity on generators in
    both orders, and every relator of R_{p,q} must map to a word that is
    trivial in the Klein form.
    """
    report = VerificationReport("verify_rewrite", p, q)
    forward, backward = klein_rewrite_map(), klein_inverse_map()

    def round_trip() -> bool:
        ok = True
        for alphabet, first, second in (
            (R_ALPHABET, forward, backward),
            (KLEIN_ALPHABET, backward, forward),
        ):
            for gen in alphabet:
                letter = Word.letter(gen.id)
                image = substitute(substitute(letter, first), second)
                ok &= report.record(
                    "round_trip",
                    f"{gen.name} returns to itself",
                    image == letter,
                    format_word(image, alphabet),
                )
        return ok

    def relator_images() -> bool:
        klein = make_hnn(HnnFamily.R_KLEIN, p, q)
        ok = True
        presentation = r_pq(p, q)
        for relator in presentation.relators:
            image = substitute(relator, forward)
            ok &= report.record(
                "relator_images",
                f"{format_word(relator, R_ALPHABET)} is trivial in the Klein form",
                is_trivial(klein, image),
                format_word(image, KLEIN_ALPHABET),
            )
        return ok

    for stage, action in (("round_trip", round_trip), ("relator_images", relator_images)):
        if not _run_stage(report, stage, action, propagate_limits=True):
            break
    logger.info(f"verify_rewrite(p={p}, q={q}): {'pass' if report.passed else 'fail'}")
    return report


def _snowflake_naming() -> Dict[tuple, Word]:
    """Ambient Schreier words of the mod-2 cover and their names in G_{p,q}."""
    pairs = {"a^2": "a", "b": "b", "a b a^-1": "b^-1", "t": "s", "a t a^-1": "t"}
    return {
        free_reduce(parse_word(ambient, KLEIN_ALPHABET)).letters: parse_word(target, SNOWFLAKE_ALPHABET)
        for ambient, target in pairs.items()
    }


def snowflake_to_klein_map() -> GeneratorMap:
    """a -> a^2, b -> b, s -> t, t -> a t a^-1."""
    return GeneratorMap.from_text(
        SNOWFLAKE_ALPHABET, KLEIN_ALPHABET, {"a": "a^2", "b": "b", "s": "t", "t": "a t a^-1"}
    )


def verify_cover_iso(p: int, q: int, limits: Optional[Limits] = None) -> CoverReport:
    """
    Run the index-2 cover pipeline and check the result against G_{p,q}.

    Stages: character check, kernel subgroup, coset enumeration (expecting
    index 2), Reidemeister-Schreier rewriting, Tietze simplification, then
    relator triviality in both directions.

    Args:
        p: first family parameter
        q: second family parameter
        limits: resource caps; defaults come from the environment

    Returns:
        CoverReport listing every check, the failing stage if any, and the
        intermediate table and presentations
    """
    limits = limits or Limits.from_env()
    report = CoverReport("verify_cover_iso", p, q)
    klein_form = make_klein_form(p, q)
    character = CharacterMap.from_values(2, (1, 0, 0))

    def character_stage() -> bool:
        return report.record(
            "character", "a -> 1, b -> 0, t -> 0 is a homomorphism to Z/2",
            character_check(klein_form, character),
        )

    def kernel_stage() -> bool:
        report.subgroup = kernel_subgroup(klein_form, character)
        return report.record(
            "kernel",
            "kernel has Schreier generators",
            bool(report.subgroup.generators),
            ", ".join(format_word(w, KLEIN_ALPHABET) for w in report.subgroup.generators),
        )

    def enumeration_stage() -> bool:
        report.table = todd_coxeter(klein_form, report.subgroup, limits.max_cosets)
        ok = report.record(
            "enumeration", f"coset enumeration closes at index {COVER_INDEX}",
            report.table.index == COVER_INDEX, f"index {report.table.index}",
        )
        return ok and report.record(
            "enumeration", "every relator closes at every coset", relators_close(report.table, klein_form)
        )

    def rewrite_stage() -> bool:
        report.rewritten = reidemeister_schreier(klein_form, report.table)
        index, ngens = report.table.index, len(klein_form.alphabet)
        expected = index * ngens - index + 1
        return report.record(
            "rewrite",
            "Schreier generator count matches Nielsen-Schreier",
            len(report.rewritten.alphabet) == expected,
            f"{len(report.rewritten.alphabet)} generators, {len(report.rewritten.relators)} relators",
        )

    def simplify_stage() -> bool:
        report.simplified = tietze_simplify(report.rewritten, limits.tietze_budget)
        simplified = report.simplified.presentation
        ok = report.record(
            "simplify",
            "Tietze simplification keeps the abelian invariants",
            abelian_invariants(simplified) == abelian_invariants(report.rewritten),
        )
        return ok and report.record(
            "simplify",
            "simplified presentation has 4 generators and 3 relators",
            (len(simplified.alphabet), len(simplified.relators)) == (4, 3),
            f"{len(simplified.alphabet)} generators, {len(simplified.relators)} relators",
        )

    def to_snowflake_stage() -> bool:
        snowflake = make_hnn(HnnFamily.G_SNOWFLAKE, p, q)
        simplified = report.simplified.presentation
        ambient = schreier_generators(klein_form, report.table)
        naming = _snowflake_naming()
        images = {}
        for gen in simplified.alphabet:
            key = ambient[gen.name].letters
            if key not in naming:
                return report.record("to_snowflake", f"{gen.name} has a name in G", False)
            images[gen.id] = naming[key]
        mapping = GeneratorMap(images, source=simplified.alphabet)
        ok = True
        for relator in simplified.relators:
            image = substitute(relator, mapping)
            ok &= report.record(
                "to_snowflake",
                f"{format_word(relator, simplified.alphabet)} is trivial in G",
                is_trivial(snowflake, image),
                format_word(image, SNOWFLAKE_ALPHABET),
            )
        return ok

    def from_snowflake_stage() -> bool:
        klein = make_hnn(HnnFamily.R_KLEIN, p, q)
        mapping = snowflake_to_klein_map()
        ok = True
        for relator in make_snowflake_G(p, q).relators:
            image = substitute(relator, mapping)
            ok &= report.record(
                "from_snowflake",
                f"{format_word(relator, SNOWFLAKE_ALPHABET)} is trivial in the Klein form",
                is_trivial(klein, image),
                format_word(image, KLEIN_ALPHABET),
            )
        return ok

    stages = (
        ("character", character_stage),
        ("kernel", kernel_stage),
        ("enumeration", enumeration_stage),
        ("rewrite", rewrite_stage),
        ("simplify", simplify_stage),
        ("to_snowflake", to_snowflake_stage),
        ("from_snowflake", from_snowflake_stage),
    )
    for stage, action in stages:
        logger.info(f"verify_cover_iso(p={p}, q={q}): {stage}")
        if not _run_stage(report, stage, action):
            logger.error(f"verify_cover_iso(p={p}, q={q}) failed at stage '{report.failed_stage}'")
            break
    return report
