/** CLI: `deepar train` fits a checkpoint on canonical pages, `deepar
 * predict` writes a prediction interchange file the evaluation harness
 * consumes directly. */

import { DESK_MODEL, DeepArModel } from './model.js';
import { readPages, readSplit, writePredictions } from './pageio.js';
import { presetByName, train } from './train.js';

interface Args {
  positional: string[];
  flags: Map<string, string | boolean>;
}

function parseArgs(argv: string[]): Args {
  const positional: string[] = [];
  const flags = new Map<string, string | boolean>();
  for (let i = 0; i < argv.length; i++) {
    const a = argv[i];
    if (a.startsWith('--')) {
      const name = a.slice(2);
      if (i + 1 < argv.length && !argv[i + 1].startsWith('--')) {
        flags.set(name, argv[++i]);
      } else {
        flags.set(name, true);
      }
    } else {
      positional.push(a);
    }
  }
  return { positional, flags };
}

function num(flags: Map<string, string | boolean>, name: string,
             fallback: number): number {
  const v = flags.get(name);
  if (v === undefined || v === true) return fallback;
  const x = Number(v);
  if (!Number.isFinite(x)) throw new Error(`--${name} expects a number`);
  return x;
}

function usage(): never {
  console.error(`usage:
  deepar train <pages...> --out model.json [--preset desk|paper]
        [--epochs N] [--batch N] [--lr X] [--momentum X] [--seed N]
        [--split split.csv --use train|validation] [--quiet]
  deepar predict <pages...> --model model.json --out preds.txt`);
  process.exit(2);
}

function cmdTrain(args: Args): void {
  const out = args.flags.get('out');
  if (typeof out !== 'string' || args.positional.length === 0) usage();
  const preset = presetByName(String(args.flags.get('preset') ?? 'desk'));
  const cfg = {
    epochs: num(args.flags, 'epochs', preset.epochs),
    batchSize: num(args.flags, 'batch', preset.batchSize),
    resolution: num(args.flags, 'resolution', preset.resolution),
    learningRate: num(args.flags, 'lr', preset.learningRate),
    momentum: num(args.flags, 'momentum', preset.momentum),
  };
  const seed = num(args.flags, 'seed', 0);

  let pages = readPages(args.positional);
  const splitFile = args.flags.get('split');
  if (typeof splitFile === 'string') {
    const use = String(args.flags.get('use') ?? 'train');
    const split = readSplit(splitFile);
    pages = pages.filter((p) => split.get(p.pageId) === use);
  }
  const trainable = pages.filter((p) => p.truth && p.chars.length > 0);
  if (trainable.length === 0) {
    console.error('no pages with ground truth to train on');
    process.exit(1);
  }
  console.error(`training on ${trainable.length} pages `
    + `(${cfg.epochs} epochs, batch ${cfg.batchSize}, lr ${cfg.learningRate}, `
    + `res ${cfg.resolution})`);
  const model = new DeepArModel(
    { ...DESK_MODEL, extractor: { ...DESK_MODEL.extractor, resolution: cfg.resolution } },
    seed,
  );
  const quiet = args.flags.get('quiet') === true;
  train(model, trainable, cfg, seed, (e) => {
    if (!quiet) {
      console.error(`epoch ${e.epoch + 1}/${cfg.epochs}: `
        + `loss ${e.meanLoss.toFixed(4)} (${e.seconds.toFixed(1)}s)`);
    }
  });
  model.save(String(out));
  console.error(`saved checkpoint to ${out}`);
}

function cmdPredict(args: Args): void {
  const modelFile = args.flags.get('model');
  const out = args.flags.get('out');
  if (typeof modelFile !== 'string' || typeof out !== 'string'
      || args.positional.length === 0) usage();
  const model = DeepArModel.load(modelFile);
  const preds = new Map<string, number[]>();
  for (const page of readPages(args.positional)) {
    preds.set(page.pageId, model.predict(page));
  }
  writePredictions(preds, String(out));
  console.error(`wrote ${preds.size} predictions to ${out}`);
}

function main(): void {
  const [cmd, ...rest] = process.argv.slice(2);
  const args = parseArgs(rest);
  try {
    if (cmd === 'train') cmdTrain(args);
    else if (cmd === 'predict') cmdPredict(args);
    else usage();
  } catch (e) {
    console.error(`error: ${(e as Error).message}`);
    process.exit(1);
  }
}

main();
