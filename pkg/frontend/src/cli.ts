#!/usr/bin/env node
/** Usage: flwin-figures --figure <id> --in <csv...> --out <path> */

import { readFileSync, writeFileSync } from 'fs';
import { CsvError, parseFlwinCsv } from './csv.js';
import { renderFigure } from './figures.js';
import { FIGURE_IDS, FigureId } from './schema.js';

interface Args {
  figure: FigureId;
  inputs: string[];
  out: string;
}

export function parseArgs(argv: string[]): Args {
  let figure = '';
  const inputs: string[] = [];
  let out = '';
  for (let i = 0; i < argv.length; i++) {
    switch (argv[i]) {
      case '--figure':
        figure = argv[++i] ?? '';
        break;
      case '--out':
        out = argv[++i] ?? '';
        break;
      case '--in':
        while (i + 1 < argv.length && !argv[i + 1].startsWith('--')) {
          inputs.push(argv[++i]);
        }
        break;
      default:
        throw new Error(`unknown argument: ${argv[i]}`);
    }
  }
  if (!FIGURE_IDS.includes(figure as FigureId)) {
    throw new Error(`--figure must be one of ${FIGURE_IDS.join(', ')}`);
  }
  if (inputs.length === 0 || !out) {
    throw new Error('need --in <csv...> and --out <path>');
  }
  return { figure: figure as FigureId, inputs, out };
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (e) {
    console.error(`error: ${(e as Error).message}`);
    return 2;
  }
  try {
    const csvs = args.inputs.map((p) => parseFlwinCsv(readFileSync(p, 'utf8')));
    const svg = renderFigure(args.figure, csvs);
    writeFileSync(args.out, svg);
  } catch (e) {
    if (e instanceof CsvError) {
      console.error(`schema error: ${e.message}`);
      return 3;
    }
    console.error(`error: ${(e as Error).message}`);
    return 1;
  }
  console.log(args.out);
  return 0;
}

if (process.argv[1] && process.argv[1].endsWith('cli.js')) {
  process.exit(main(process.argv.slice(2)));
}
