import { CsvError, FlwinCsv } from './csv.js';

export type FigureId =
  | 'fig3' | 'fig4' | 'fig5' | 'fig6' | 'fig7'
  | 'fig10' | 'fig12' | 'fig13' | 'fig14';

export const FIGURE_IDS: FigureId[] = [
  'fig3', 'fig4', 'fig5', 'fig6', 'fig7', 'fig10', 'fig12', 'fig13', 'fig14',
];

/** Required columns per input, in input order. fig14 takes two CSVs. */
export const FIGURE_SCHEMAS: Record<FigureId, string[][]> = {
  fig3: [['sweep_value', 'analytic', 'mc_mean', 'mc_ci_low', 'mc_ci_high']],
  fig4: [['sweep_value', 'analytic', 'mc_mean', 'mc_ci_low', 'mc_ci_high']],
  fig5: [['sweep_value', 'analytic_up', 'mc_up_mean', 'mc_up_std_error']],
  fig6: [['sweep_value', 'analytic_down', 'mc_down_mean', 'mc_down_std_error']],
  fig7: [['sweep_value', 'analytic', 'mc_mean', 'mc_std_error']],
  fig10: [['round', 'global_loss', 'loss_ratio', 'n_up_success', 'n_down_success']],
  fig12: [['b_up_max_hz', 'k_max', 'round_rate', 'global_accuracy']],
  fig13: [['c_sum_max_cycles', 'eps_local_effective', 'local_accuracy']],
  fig14: [
    ['k_max', 'round_rate'],
    ['eps_local_effective'],
  ],
};

export function validateInputs(figure: FigureId, inputs: FlwinCsv[]): void {
  const schemas = FIGURE_SCHEMAS[figure];
  if (inputs.length !== schemas.length) {
    throw new CsvError(
      `${figure} expects ${schemas.length} input CSV(s), got ${inputs.length}`,
    );
  }
  schemas.forEach((required, i) => {
    for (const col of required) {
      if (!inputs[i].columns.includes(col)) {
        throw new CsvError(`${figure} input ${i + 1}: missing column: ${col}`);
      }
    }
    if (inputs[i].rows.length === 0) {
      throw new CsvError(`${figure} input ${i + 1}: empty data section`);
    }
  });
}
