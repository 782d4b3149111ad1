// Age-band taxonomy shared with the stacking core. Order is the class
// order everywhere: classes.txt, probability columns, one-hot targets.

export interface Band {
  label: string;
  low: number;
  high: number;
  midpoint: number;
}

export const BANDS: readonly Band[] = [
  { label: '[0-5]', low: 0, high: 5, midpoint: 2.5 },
  { label: '[6-10]', low: 6, high: 10, midpoint: 8.0 },
  { label: '[11-15]', low: 11, high: 15, midpoint: 13.0 },
  { label: '[16-17]', low: 16, high: 17, midpoint: 16.5 },
  { label: '[18-25]', low: 18, high: 25, midpoint: 21.5 },
];

export const N_CLASSES = BANDS.length;

export function bandIndexOf(age: number): number {
  if (!Number.isInteger(age) || age < 0 || age > 25) {
    throw new RangeError(`no band for age ${age}; bands cover 0..25`);
  }
  for (let i = 0; i < BANDS.length; i++) {
    if (age >= BANDS[i].low && age <= BANDS[i].high) return i;
  }
  throw new RangeError(`no band for age ${age}`); // unreachable
}

// Argmax with ties resolved to the lowest index: misclassifying down is
// the safer error, so an exact tie goes to the younger band.
export function argmaxYoungest(probabilities: ArrayLike<number>): number {
  let best = 0;
  for (let i = 1; i < probabilities.length; i++) {
    if (probabilities[i] > probabilities[best]) best = i;
  }
  return best;
}
