"""
Report Service
"""

from jinja2 import Template

from bvpkit.services.experiment_service import FDM, MATRIX_TOLERANCES, METHODS, SHOOTING, SolutionClass


METHOD_TITLES = {
    SHOOTING: 'Shooting',
    FDM: 'Finite-Difference',
}

METRIC_NAMES = {
    SHOOTING: '|v(b) - beta|',
    FDM: '|delta|_2',
}

_TEMPLATE_OPTIONS = dict(trim_blocks=True, lstrip_blocks=True, keep_trailing_newline=True)


RUN_TEXT_TEMPLATE = """
{% for run in runs %}
{{ run.marker }} {{ run.method }} / {{ run.solution }}: {{ run.status }}
{% if run.error %}
    error: {{ run.error }}
{% else %}
    iterations: {{ run.iterations }}
    final {{ run.metric_name }} = {{ "%.3e"|format(run.final_metric) }} (tolerance {{ "%g"|format(run.tolerance) }})
{% if run.p_star is not none %}
    p* = {{ "%.15g"|format(run.p_star) }}
{% endif %}
{% endif %}
{% endfor %}
"""

RUN_CSV_TEMPLATE = """method,solution,tolerance,iterations,converged,final_metric,p_star
{% for run in runs %}
{{ run.method }},{{ run.solution }},{{ "%g"|format(run.tolerance) }},{{ run.iterations }},{{ run.converged }},{{ run.final_metric_text }},{{ run.p_star_text }}
{% endfor %}
"""

MATRIX_TEXT_TEMPLATE = """
{% if jacobian %}
Finite-difference Jacobian: {{ jacobian }}

{% endif %}
{% for table in tables %}
Iterations per method, tolerance {{ "%g"|format(table.tolerance) }} (max {{ max_iterations }})
{{ "%-20s"|format("") }}{{ "%10s"|format("Decaying") }}{{ "%10s"|format("One-Node") }}    reference
{% for row in table.rows %}
{{ "%-20s"|format(row.title) }}{{ "%10s"|format(row.cells[0]) }}{{ "%10s"|format(row.cells[1]) }}    {{ row.reference }}
{% endfor %}

{% endfor %}
"""

MATRIX_CSV_TEMPLATE = """method,solution,tolerance,iterations,converged
{% for cell in cells %}
{{ cell.method }},{{ cell.solution.value }},{{ "%g"|format(cell.tolerance) }},{{ cell.label }},{{ "true" if cell.converged else "false" }}
{% endfor %}
"""


def _run_rows(outcomes):
    rows = []
    for outcome in outcomes:
        report = outcome.report
        if outcome.error is not None:
            marker, status = '✗', 'solver error'
        elif report.converged:
            marker, status = '✓', 'converged'
        else:
            marker, status = '⚠', 'not converged'
        rows.append({
            'marker': marker,
            'status': status,
            'method': outcome.method,
            'solution': outcome.solution.value,
            'tolerance': outcome.tolerance,
            'error': outcome.error,
            'iterations': report.iterations if report else '',
            'converged': 'true' if outcome.converged else 'false',
            'metric_name': METRIC_NAMES[outcome.method],
            'final_metric': report.final_metric if report else None,
            'final_metric_text': '%.17g' % report.final_metric if report else '',
            'p_star': outcome.p_star,
            'p_star_text': '%.17g' % outcome.p_star if outcome.p_star is not None else '',
        })
    return rows


def render_run_report(outcomes, report_format='text'):
    """Render single-run outcomes as text or CSV"""
    source = RUN_CSV_TEMPLATE if report_format == 'csv' else RUN_TEXT_TEMPLATE
    text = Template(source, **_TEMPLATE_OPTIONS).render(runs=_run_rows(outcomes))
    return text.lstrip('\n')


def get_matrix_tables(outcomes):
    """Group matrix cells into one method x solution table per tolerance"""
    by_key = {(o.method, o.solution, o.tolerance): o for o in outcomes}
    tables = []
    for tolerance in MATRIX_TOLERANCES:
        rows = []
        for method in METHODS:
            cells = [by_key[(method, solution, tolerance)] for solution in SolutionClass]
            references = [
                'NA' if cell.reference is None else str(cell.reference) for cell in cells
            ]
            rows.append({
                'title': METHOD_TITLES[method],
                'cells': [cell.label for cell in cells],
                'reference': ' / '.join(references),
            })
        tables.append({'tolerance': tolerance, 'rows': rows})
    return tables


def render_matrix_report(outcomes, report_format='text', max_iterations=100, jacobian=None):
    """Render the iteration-count matrix as text tables or CSV"""
    if report_format == 'csv':
        return Template(MATRIX_CSV_TEMPLATE, **_TEMPLATE_OPTIONS).render(cells=outcomes)

    text = Template(MATRIX_TEXT_TEMPLATE, **_TEMPLATE_OPTIONS).render(
        tables=get_matrix_tables(outcomes),
        max_iterations=max_iterations,
        jacobian=jacobian,
    )
    return text.lstrip('\n')
