"""Bundled coefficient tables: loading, exact verification and formula lookup."""
from fractions import Fraction
import json
import logging
from pathlib import Path

from pydantic import ValidationError

from app.config import settings
from app.errors import FixtureParseError, MpfError
from app.models.formula import MpfFormula
from app.models.table import RowVerification, TableFixture, TableRow, TableVerificationReport
from app.services.exact_service import generalized_vandermonde, is_zero, residual, unit_vector

logger = logging.getLogger(__name__)

TABLE_NAMES = {"base2": 2, "base4": 4}


def fixture_path(alpha: int) -> Path:
    return Path(settings.mpf_fixtures_dir) / f"table_base{alpha}.json"


def parse_fixture(data: bytes, name: str) -> TableFixture:
    """Parse fixture bytes; errors carry a ``name:rows[i]`` locator."""
    try:
        raw = json.loads(data)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FixtureParseError(name, f"not valid JSON ({exc})") from exc
    if not isinstance(raw, dict) or not isinstance(raw.get("rows"), list):
        raise FixtureParseError(name, "expected an object with a 'rows' list")
    try:
        alpha = int(raw.get("alpha"))
    except (TypeError, ValueError) as exc:
        raise FixtureParseError(name, "missing or non-integer 'alpha'") from exc

    rows = []
    for index, row in enumerate(raw["rows"]):
        try:
            rows.append(TableRow.model_validate(row))
        except ValidationError as exc:
            messages = "; ".join(f"{'.'.join(map(str, e['loc']))}: {e['msg']}" for e in exc.errors())
            raise FixtureParseError(f"{name}:rows[{index}]", messages) from exc
    return TableFixture(alpha=alpha, rows=rows)


def load_fixture(path: Path | str) -> TableFixture:
    path = Path(path)
    return parse_fixture(path.read_bytes(), path.name)


def printed_digits_match(exact: Fraction, printed: str) -> bool:
    """True when ``exact`` rounds to ``printed`` at the printed number of decimals."""
    decimals = len(printed.split(".", 1)[1]) if "." in printed else 0
    return abs(exact - Fraction(printed)) <= Fraction(1, 2 * 10**decimals)


def verify_row(row: TableRow, alpha: int, locator: str) -> RowVerification:
    failures = []
    residual_zero = False
    try:
        system = generalized_vandermonde(row.exponents, alpha, row.m)
        if len(row.coefficients) != system.cols:
            failures.append(f"{len(row.coefficients)} coefficients for {system.cols} exponents")
        else:
            r = residual(system, row.coefficients, unit_vector(system.rows))
            residual_zero = is_zero(r)
            if not residual_zero:
                nonzero = [f"row {i}: {v}" for i, v in enumerate(r) if v != 0]
                failures.append(f"nonzero residual ({', '.join(nonzero)})")
    except MpfError as exc:
        failures.append(str(exc))

    a_norm1 = sum((abs(a) for a in row.coefficients), Fraction(0))
    a_match = printed_digits_match(a_norm1, row.a_norm1)
    if not a_match:
        failures.append(f"|a|_1 = {float(a_norm1):.6f} does not round to printed {row.a_norm1}")
    k_match = sum(row.exponents) == row.k_norm1
    if not k_match:
        failures.append(f"|k|_1 = {sum(row.exponents)} but printed {row.k_norm1}")

    return RowVerification(
        locator=locator,
        section=row.section,
        m=row.m,
        passed=not failures,
        residual_zero=residual_zero,
        a_norm1_printed=row.a_norm1,
        a_norm1_exact=a_norm1,
        a_norm1_match=a_match,
        k_norm1_match=k_match,
        failures=failures,
    )


def verify_fixture_bytes(data: bytes, name: str) -> TableVerificationReport:
    fixture = parse_fixture(data, name)
    rows = [verify_row(row, fixture.alpha, f"{name}:rows[{i}]") for i, row in enumerate(fixture.rows)]
    failed = sum(1 for row in rows if not row.passed)
    for row in rows:
        if not row.passed:
            logger.warning(f"Table row {row.locator} failed: {'; '.join(row.failures)}")
    logger.info(f"Verified {name}: {len(rows) - failed}/{len(rows)} rows pass")
    return TableVerificationReport(
        fixture=name,
        alpha=fixture.alpha,
        row_count=len(rows),
        failed_count=failed,
        passed=failed == 0,
        rows=rows,
    )


def verify_tables(path: Path | str) -> TableVerificationReport:
    """Exact residual, printed ‖a‖₁ digits and ‖k‖₁ for every row of a fixture file."""
    path = Path(path)
    return verify_fixture_bytes(path.read_bytes(), path.name)


def verify_named_table(name: str) -> TableVerificationReport:
    if name not in TABLE_NAMES:
        raise FixtureParseError(name, f"unknown table, expected one of {sorted(TABLE_NAMES)}")
    return verify_tables(fixture_path(TABLE_NAMES[name]))


def formula_id(alpha: int, section: str, m: int) -> str:
    return f"base{alpha}-{section}-m{m}"


def table_formulas(alpha: int, section: str | None = None, max_m: int | None = None) -> dict[str, MpfFormula]:
    """Bundled table rows as formulas keyed like ``base2-min_a1k1-m3``."""
    fixture = load_fixture(fixture_path(alpha))
    formulas = {}
    for row in fixture.rows:
        if section is not None and row.section != section:
            continue
        if max_m is not None and row.m > max_m:
            continue
        formulas[formula_id(fixture.alpha, row.section, row.m)] = MpfFormula(
            base_order=fixture.alpha,
            order=2 * row.m,
            exponents=row.exponents,
            coefficients=row.coefficients,
        )
    return formulas


def table_formula(alpha: int, section: str, m: int) -> MpfFormula:
    key = formula_id(alpha, section, m)
    formulas = table_formulas(alpha, section=section)
    if key not in formulas:
        raise FixtureParseError(fixture_path(alpha).name, f"no row {key}")
    return formulas[key]
