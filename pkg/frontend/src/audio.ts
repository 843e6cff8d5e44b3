/** Playback port. The controller only needs load/play plus a signal
 *  that playback actually started; headless tests substitute this. */
export interface AudioPort {
  load(url: string): void;
  play(): Promise<void>;
  onStarted(listener: () => void): void;
}

export class HtmlAudioPlayer implements AudioPort {
  private readonly element: HTMLAudioElement;
  private readonly listeners: Array<() => void> = [];

  constructor(element: HTMLAudioElement = new Audio()) {
    this.element = element;
    this.element.preload = "auto";
    this.element.addEventListener("play", () => {
      for (const listener of this.listeners) {
        listener();
      }
    });
  }

  load(url: string): void {
    this.element.src = url;
  }

  async play(): Promise<void> {
    await this.element.play();
  }

  onStarted(listener: () => void): void {
    this.listeners.push(listener);
  }
}
