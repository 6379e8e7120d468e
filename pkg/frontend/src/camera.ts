// Browser camera capture with upload/paste as universal fallbacks. Captured
// frames live in memory only; nothing is written to storage.

export async function startCamera(video: HTMLVideoElement): Promise<MediaStream> {
  const stream = await navigator.mediaDevices.getUserMedia({
    video: { facingMode: "environment" },
    audio: false,
  });
  video.srcObject = stream;
  await video.play();
  return stream;
}

export function stopCamera(stream: MediaStream): void {
  for (const track of stream.getTracks()) track.stop();
}

/** Strip the data-URL prefix, leaving the raw base64 payload the API wants. */
export function dataUrlToBase64(dataUrl: string): string {
  const comma = dataUrl.indexOf(",");
  if (comma === -1 || !dataUrl.startsWith("data:")) {
    throw new Error("not a data URL");
  }
  return dataUrl.slice(comma + 1);
}

export function captureFrame(video: HTMLVideoElement): string {
  const canvas = document.createElement("canvas");
  canvas.width = video.videoWidth;
  canvas.height = video.videoHeight;
  const context = canvas.getContext("2d");
  if (!context) throw new Error("2d canvas not available");
  context.drawImage(video, 0, 0);
  return dataUrlToBase64(canvas.toDataURL("image/png"));
}

export function fileToBase64(file: Blob): Promise<string> {
  return new Promise((resolve, reject) => {
    const reader = new FileReader();
    reader.onerror = () => reject(reader.error);
    reader.onload = () => resolve(dataUrlToBase64(String(reader.result)));
    reader.readAsDataURL(file);
  });
}
