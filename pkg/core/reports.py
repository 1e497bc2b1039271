from core.abox_checker import ComplianceReport, Violation
from core.owl_model import Ontology, local_name
from core.preprocess import LayerTables
from core.schema_check import Diagnostic, format_diagnostic
from marshmallow import Schema
from typing import List, Sequence
import marshmallow.fields

REPORT_VERSION = 'reg2owl report v1'


class DiagnosticSchema(Schema):
    severity = marshmallow.fields.Function(lambda d: d.severity.value)
    code = marshmallow.fields.Function(lambda d: d.code.name)
    unit_id = marshmallow.fields.Int()
    message = marshmallow.fields.Str()


class TraceStepSchema(Schema):
    kind = marshmallow.fields.Function(lambda step: type(step.item).__name__)
    sentence = marshmallow.fields.Str()


class ViolationSchema(Schema):
    individual = marshmallow.fields.Str()
    gci = marshmallow.fields.Function(lambda v: v.trace[0].sentence)
    trace = marshmallow.fields.List(marshmallow.fields.Nested(TraceStepSchema))


class ClassificationSchema(Schema):
    individual = marshmallow.fields.Function(lambda c: c[0])
    role = marshmallow.fields.Function(lambda c: c[1])


class ComplianceReportSchema(Schema):
    version = marshmallow.fields.Constant(REPORT_VERSION)
    consistent = marshmallow.fields.Bool()
    classifications = marshmallow.fields.List(marshmallow.fields.Nested(ClassificationSchema))
    violations = marshmallow.fields.List(marshmallow.fields.Nested(ViolationSchema))


diagnostic_schema = DiagnosticSchema()
compliance_report_schema = ComplianceReportSchema()


def diagnostics_json(diagnostics: Sequence[Diagnostic]) -> str:
    return diagnostic_schema.dumps(list(diagnostics), many=True, indent=2)


def compliance_json(report: ComplianceReport) -> str:
    return compliance_report_schema.dumps(report, indent=2)


def diagnostics_text(diagnostics: Sequence[Diagnostic]) -> str:
    return '# ' + REPORT_VERSION + '\n' + ''.join(format_diagnostic(d) + '\n' for d in diagnostics)


def _violation_lines(number: int, violation: Violation) -> List[str]:
    lines = ['violation ' + str(number) + ': ' + local_name(violation.individual)]
    lines += ['  ' + str(i) + ') ' + step.sentence for i, step in enumerate(violation.trace, start=1)]
    return lines


def compliance_text(report: ComplianceReport, onto: Ontology) -> str:
    lines = ['# ' + REPORT_VERSION, 'consistent: ' + str(report.consistent).lower(),
             'classifications: ' + str(len(report.classifications))]
    for individual, role in report.classifications:
        lines.append('  ' + local_name(individual) + ' -> ' + onto.label(role))
    lines.append('violations: ' + str(len(report.violations)))
    for number, violation in enumerate(report.violations, start=1):
        lines += _violation_lines(number, violation)
    return '\n'.join(lines) + '\n'


def _ref(value) -> str:
    return '' if value is None else str(value)


# The Tr, ST and SR tables, tab separated
def format_tables(tables: LayerTables) -> str:
    lines = ['# Tr', 'unit\tsurface\tterm\tiri']
    lines += ['\t'.join((str(r.unit_id), r.surface, r.term_label, r.term_iri)) for r in tables.terms]
    lines += ['', '# ST', 'unit\tsurface\ttype\tdomain\trange\tof']
    lines += ['\t'.join((str(r.unit_id), r.surface, r.type_tag.value, _ref(r.domain_ref), _ref(r.range_ref),
                         ','.join(str(o) for o in r.of_refs))) for r in tables.types]
    lines += ['', '# SR', 'unit\tsurface\trole\tto']
    lines += ['\t'.join((str(r.unit_id), r.surface, r.role_tag.value, _ref(r.to_ref))) for r in tables.roles]
    return '\n'.join(lines) + '\n'
