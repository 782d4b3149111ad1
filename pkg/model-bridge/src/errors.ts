// Error types named after the failure they report; the CLI maps any of
// these to exit 1 with a one-line message.

export class MissingImage extends Error {
  constructor(public subjectId: string, public path: string) {
    super(`missing image for ${subjectId}: ${path}`);
    this.name = 'MissingImage';
  }
}

export class EmptyClass extends Error {
  constructor(public bandLabel: string) {
    super(`band ${bandLabel} has no training images`);
    this.name = 'EmptyClass';
  }
}

export class EmptyBand extends Error {
  constructor(public bandLabel: string) {
    super(`band ${bandLabel} has no subjects`);
    this.name = 'EmptyBand';
  }
}

export class DimensionMismatch extends Error {
  constructor(expected: string, got: string) {
    super(`expected ${expected}, got ${got}`);
    this.name = 'DimensionMismatch';
  }
}

export class ShapeMismatch extends Error {
  constructor(detail: string) {
    super(detail);
    this.name = 'ShapeMismatch';
  }
}

export class SchemaError extends Error {
  constructor(public line: number, detail: string) {
    super(`line ${line}: ${detail}`);
    this.name = 'SchemaError';
  }
}
