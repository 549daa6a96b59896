public class ExportFeedbackAction
{
    public void AssignExport(Export export)
    {
        _exportStore.Assign(export);
    }
    public void DisplayExport(Export export)
    {
        _exportStore.Display(export);
    }
    public void LoadFeedback(Feedback feedback)
    {
        _feedbackStore.Load(feedback);
    }
    public void EditFeedback(Feedback feedback)
    {
        _feedbackStore.Edit(feedback);
    }
}
