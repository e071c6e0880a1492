import { FlwinCsv, numericColumn } from './csv.js';
import { FigureId, validateInputs } from './schema.js';
import { renderChart, renderHeatmap, Series } from './svg.js';

function analyticVsMc(
  csv: FlwinCsv,
  cols: { analytic: string; mc: string; ciLow?: string; ciHigh?: string; se?: string },
  labels: { title: string; x: string; y: string },
  xLog = true,
): string {
  const x = numericColumn(csv, 'sweep_value');
  const analytic: Series = {
    x,
    y: numericColumn(csv, cols.analytic),
    label: 'analytic',
    kind: 'line',
  };
  const mc: Series = {
    x,
    y: numericColumn(csv, cols.mc),
    label: 'simulation',
    kind: 'markers',
  };
  if (cols.ciLow && cols.ciHigh) {
    mc.errLow = numericColumn(csv, cols.ciLow);
    mc.errHigh = numericColumn(csv, cols.ciHigh);
  } else if (cols.se) {
    const se = numericColumn(csv, cols.se);
    mc.errLow = mc.y.map((v, i) => v - 1.96 * se[i]);
    mc.errHigh = mc.y.map((v, i) => v + 1.96 * se[i]);
  }
  return renderChart({
    title: labels.title,
    xLabel: labels.x,
    yLabel: labels.y,
    xLog,
    series: [analytic, mc],
  });
}

export function renderFigure(figure: FigureId, inputs: FlwinCsv[]): string {
  validateInputs(figure, inputs);
  const [csv] = inputs;
  switch (figure) {
    case 'fig3':
      return analyticVsMc(
        csv,
        { analytic: 'analytic', mc: 'mc_mean', ciLow: 'mc_ci_low', ciHigh: 'mc_ci_high' },
        { title: 'Uplink success probability', x: csv.rows[0].sweep_param || 'parameter', y: 'P(success)' },
      );
    case 'fig4':
      return analyticVsMc(
        csv,
        { analytic: 'analytic', mc: 'mc_mean', ciLow: 'mc_ci_low', ciHigh: 'mc_ci_high' },
        { title: 'Downlink success probability', x: csv.rows[0].sweep_param || 'parameter', y: 'P(success)' },
        false,
      );
    case 'fig5':
      return analyticVsMc(
        csv,
        { analytic: 'analytic_up', mc: 'mc_up_mean', se: 'mc_up_std_error' },
        { title: 'Expected uplink bandwidth', x: csv.rows[0].sweep_param || 'parameter', y: 'bandwidth (Hz)' },
      );
    case 'fig6':
      return analyticVsMc(
        csv,
        { analytic: 'analytic_down', mc: 'mc_down_mean', se: 'mc_down_std_error' },
        { title: 'Expected downlink bandwidth', x: csv.rows[0].sweep_param || 'parameter', y: 'bandwidth (Hz)' },
      );
    case 'fig7':
      return analyticVsMc(
        csv,
        { analytic: 'analytic', mc: 'mc_mean', se: 'mc_std_error' },
        { title: 'Expected total compute', x: csv.rows[0].sweep_param || 'parameter', y: 'compute (cycles)' },
      );
    case 'fig10': {
      const rounds = numericColumn(csv, 'round');
      return renderChart({
        title: 'Federated training convergence',
        xLabel: 'communication round',
        yLabel: 'relative loss gap',
        series: [
          { x: rounds, y: numericColumn(csv, 'loss_ratio'), label: 'loss ratio', kind: 'line' },
        ],
      });
    }
    case 'fig12':
      return renderChart({
        title: 'Global accuracy vs uplink bandwidth budget',
        xLabel: 'uplink bandwidth budget (Hz)',
        yLabel: 'global accuracy',
        xLog: true,
        series: [
          {
            x: numericColumn(csv, 'b_up_max_hz'),
            y: numericColumn(csv, 'global_accuracy'),
            label: 'achievable',
            kind: 'line',
          },
        ],
      });
    case 'fig13':
      return renderChart({
        title: 'Local accuracy vs compute budget',
        xLabel: 'total compute budget (cycles)',
        yLabel: 'local accuracy',
        xLog: true,
        series: [
          {
            x: numericColumn(csv, 'c_sum_max_cycles'),
            y: numericColumn(csv, 'local_accuracy'),
            label: 'achievable',
            kind: 'line',
          },
        ],
      });
    case 'fig14': {
      // joint surface: accuracy = 1 - exp(-k_max * (1 - eps_l) * round_rate)
      const [bandCsv, compCsv] = inputs;
      const kMax = numericColumn(bandCsv, 'k_max');
      const rate = numericColumn(bandCsv, 'round_rate');
      const epsL = numericColumn(compCsv, 'eps_local_effective');
      const values = epsL.map((e) =>
        kMax.map((k, xi) => 1 - Math.exp(-k * (1 - e) * rate[xi])),
      );
      return renderHeatmap({
        title: 'Global accuracy over bandwidth and compute budgets',
        xLabel: 'affordable rounds (bandwidth budget)',
        yLabel: 'local accuracy loss (compute budget)',
        xTicks: kMax.map((k) => String(k)),
        yTicks: epsL.map((e) => e.toFixed(3)),
        values,
      });
    }
  }
}
