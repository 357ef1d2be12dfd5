"""
レポート整形

標準出力に出すテキストはすべてここのテンプレートで組み立てる。
同じ入力からは常にバイト単位で同じ出力になるよう、時刻などは含めない。
"""

from typing import Iterable, List, Optional

from jinja2 import Template

from ..analysis.reconstruct import CoverageReport, ExperimentSummary, TrialResult
from ..analysis.stats import ComplexityBandReport, TestReport, format_report
from ..cipher.boolfn import AnfPolynomial, FunctionMetrics, print_anf
from ..cipher.gf2poly import FactorSet, FeedbackPolynomial, format_polynomial
from ..cipher.lili import GeneratorConfig
from ..utils.bit_utils import BitUtils

_CONFIG_TEMPLATE = """\
# filter: {{ fingerprint }} ({{ form }}, {{ terms }} terms)
# data-positions: {{ data_positions }}
# clock-positions: {{ clock_positions }}
"""

_COVERAGE_TEMPLATE = """\
observations: {{ c.observations }}
distinct inputs: {{ c.distinct_inputs_seen }}/{{ c.size }}
first full coverage: {{ c.first_full_coverage_index | default("none", true) }}
{% if c.conflicts %}conflicts: {{ c.conflicts | join(",") }}
{% endif %}"""

_RECONSTRUCTION_TEMPLATE = """\
terms: {{ anf.term_count }}, degree: {{ anf.degree }}
{% if matches is not none %}matches configured filter: {{ "yes" if matches else "no" }}
{% endif %}anf: {{ anf_text }}
"""

_MIN_BITS_TEMPLATE = """\
trials: {{ s.trials }}
seed: {{ s.rng_seed }}
budget: {{ s.budget }}
completed: {{ s.completed }}
failures: {{ s.failures }}
{% if s.completed %}min: {{ s.minimum }}
median: {{ "%.1f" | format(s.median) }}
mean: {{ "%.1f" | format(s.mean) }}
max: {{ s.maximum }}
{% endif -%}
fraction in [4096, 8192]: {{ "%.4f" | format(s.fraction_in_reference_range) }}
fraction in [4096, 65536]: {{ "%.4f" | format(s.fraction_within_budget_range) }}
uniform reference N*H_N: {{ "%.1f" | format(s.expected_coverage_draws) }}
{% for r in s.results %}trial {{ r.trial }} key {{ r.key_hex }} {{ outcome(r) }}
{% endfor %}"""

_POLYCHECK_TEMPLATE = """\
polynomial: {{ poly_text }}
degree: {{ degree }}
irreducible: {{ yes_no(irreducible) }}, primitive: {{ yes_no(primitive) }}
{% if factorization %}factorization: 2^{{ degree }}-1 = {{ factorization }}
{%- if prime_order %} (prime){% endif %}
{% endif %}"""

_METRICS_TEMPLATE = """\
variables: {{ n }}
terms: {{ terms }}, degree: {{ degree }}
degree profile: {{ profile }}
{% if m %}weight: {{ m.weight }}
balanced: {{ "yes" if m.is_balanced else "no" }}
nonlinearity: {{ m.nonlinearity }}
{% endif %}"""

_BAND_TEMPLATE = """\
linear-complexity n={{ b.n }} L={{ b.linear_complexity }}
{{- " max-deviation=" ~ ("%.6g" | format(b.max_deviation)) }}
{{- " PASS" if b.passed else " FAIL" }}
"""


def _render(template: str, **context) -> str:
    return Template(template, keep_trailing_newline=True).render(**context)


def _profile_text(profile: dict) -> str:
    return " ".join(f"{degree}:{count}" for degree, count in sorted(profile.items()))


def _yes_no(flag: bool) -> str:
    return "yes" if flag else "no"


def _trial_outcome(r: TrialResult) -> str:
    if r.first_full_coverage_index is not None:
        return str(r.first_full_coverage_index)
    return f"budget-exceeded ({r.distinct_inputs_seen} distinct)"


class ReportFormatter:
    """各コマンドのレポートを組み立てる"""

    def config_summary(self, config: GeneratorConfig) -> str:
        return _render(
            _CONFIG_TEMPLATE,
            fingerprint=config.fingerprint(),
            form=config.filter_form,
            terms=config.filter.term_count,
            data_positions=BitUtils.format_positions(config.data_positions),
            clock_positions=BitUtils.format_positions(config.clock_positions),
        )

    def coverage(self, report: CoverageReport) -> str:
        return _render(_COVERAGE_TEMPLATE, c=report)

    def reconstruction(self, anf: AnfPolynomial,
                       matches: Optional[bool] = None) -> str:
        return _render(
            _RECONSTRUCTION_TEMPLATE, anf=anf, anf_text=print_anf(anf), matches=matches
        )

    def min_bits(self, summary: ExperimentSummary) -> str:
        return _render(_MIN_BITS_TEMPLATE, s=summary, outcome=_trial_outcome)

    def polycheck(self, poly: FeedbackPolynomial, irreducible: bool, primitive: bool,
                  factors: Optional[FactorSet]) -> str:
        return _render(
            _POLYCHECK_TEMPLATE,
            yes_no=_yes_no,
            poly_text=format_polynomial(poly),
            degree=poly.degree,
            irreducible=irreducible,
            primitive=primitive,
            factorization=str(factors) if factors else "",
            prime_order=bool(factors) and len(factors.primes) == 1,
        )

    def function_metrics(self, anf: AnfPolynomial, m: Optional[FunctionMetrics]) -> str:
        return _render(
            _METRICS_TEMPLATE,
            n=anf.n,
            terms=anf.term_count,
            degree=anf.degree,
            profile=_profile_text(anf.degree_profile()),
            m=m,
        )

    def battery(self, reports: Iterable[TestReport],
                band: Optional[ComplexityBandReport] = None) -> str:
        lines: List[str] = [format_report(r) for r in reports]
        text = "\n".join(lines) + "\n"
        if band is not None:
            text += _render(_BAND_TEMPLATE, b=band)
        return text
