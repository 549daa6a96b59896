public class MatrixFeedbackService
{
    public void AddFeedback(Feedback feedback)
    {
        _feedbackStore.Add(feedback);
    }
    public void NotifyMatrix(Matrix matrix)
    {
        _matrixStore.Notify(matrix);
    }
    public void SaveMatrix(Matrix matrix)
    {
        _matrixStore.Save(matrix);
    }
}
